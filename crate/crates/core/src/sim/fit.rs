use super::exact::exact_enumerate;
use super::report::ExponentEstimate;
use super::stats::{derive_seed, ls_slope};
use crate::error::{Error, Result};
use crate::exponent::{objective, SourceModel};
use crate::prob::Channel;
use crate::scheme::{SchemeConfig, SchemeParams};

/// Exact `β_n` for each blocklength, each with a fresh codebook seeded by
/// `derive_seed(seed, i)`, and the least-squares slope of `-log2 β_n` on `n`.
pub fn empirical_exponent(
    model: &SourceModel,
    test_channel: &Channel,
    epsilon: f64,
    mu: f64,
    n_values: &[usize],
    seed: u64,
) -> Result<ExponentEstimate> {
    if n_values.is_empty() {
        return Err(Error::Domain("n_values must not be empty".into()));
    }
    let (_, theory_theta) = objective(model, test_channel)?;
    let mut est = ExponentEstimate {
        n_values: Vec::new(),
        beta_values: Vec::new(),
        alpha_values: Vec::new(),
        mean_len_values: Vec::new(),
        codebook_seeds: Vec::new(),
        excluded_n: Vec::new(),
        slope_bits: 0.0,
        theory_theta,
    };
    for (i, &n) in n_values.iter().enumerate() {
        let codebook_seed = derive_seed(seed, i as u64);
        let params = SchemeParams::build(model, test_channel, SchemeConfig::new(n, epsilon, mu, codebook_seed))?;
        let report = exact_enumerate(&params)?;
        let beta = report.beta_hat.expect("exact reports carry both sides");
        if beta <= 0.0 {
            est.excluded_n.push(n);
            continue;
        }
        est.n_values.push(n);
        est.beta_values.push(beta);
        est.alpha_values.push(report.alpha_hat.expect("exact reports carry both sides"));
        est.mean_len_values.push(report.mean_len_bits);
        est.codebook_seeds.push(codebook_seed);
    }
    let xs: Vec<f64> = est.n_values.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = est.beta_values.iter().map(|b| -b.log2()).collect();
    est.slope_bits = match xs.len() {
        0 => {
            return Err(Error::Domain(format!(
                "beta_n = 0 at every blocklength {:?}",
                est.excluded_n
            )))
        }
        1 => ys[0] / xs[0],
        _ => ls_slope(&xs, &ys),
    };
    Ok(est)
}
