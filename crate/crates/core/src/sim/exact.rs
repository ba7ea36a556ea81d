use std::collections::HashMap;

use rayon::prelude::*;

use super::report::{ErrorReport, ReportMode};
use crate::error::{Error, Result};
use crate::prob::Sequence;
use crate::scheme::{BitString, Hypothesis, Scheme};

/// Default cap on `|X|^n |Y|^n` enumerated pairs.
pub const EXACT_GUARD: f64 = 16_777_216.0;

/// `|X|^n |Y|^n` for the scheme's model.
pub fn pair_count(scheme: &(impl Scheme + ?Sized)) -> f64 {
    let m = scheme.model();
    let n = scheme.blocklength() as f64;
    (m.x_alphabet() as f64).powf(n) * (m.y_alphabet() as f64).powf(n)
}

fn all_sequences(alphabet: usize, n: usize) -> Vec<Sequence> {
    let count = (alphabet as u64).pow(n as u32);
    (0..count).map(|i| Sequence::from_index(alphabet, n, i)).collect()
}

struct PerX {
    alpha: f64,
    beta: f64,
    len: f64,
    len_sq: f64,
}

/// Exact `α_n`, `β_n` and `E[len(M)]` by summing over every pair `(x, y)`,
/// with the encoder's choice among matching codewords integrated out.
pub fn exact_enumerate<S: Scheme + ?Sized>(scheme: &S) -> Result<ErrorReport> {
    exact_enumerate_guarded(scheme, EXACT_GUARD)
}

pub fn exact_enumerate_guarded<S: Scheme + ?Sized>(scheme: &S, guard: f64) -> Result<ErrorReport> {
    let estimate = pair_count(scheme);
    if estimate > guard {
        return Err(Error::GuardExceeded {
            what: "exact enumeration",
            estimate,
            limit: guard,
        });
    }
    let model = scheme.model();
    let n = scheme.blocklength();
    let (nx, ny) = (model.x_alphabet(), model.y_alphabet());
    let xs = all_sequences(nx, n);
    let ys = all_sequences(ny, n);

    let laws: Vec<Vec<(BitString, f64)>> = xs.par_iter().map(|x| scheme.message_law(x)).collect();

    // distinct messages in first-seen order, so ids do not depend on hashing
    let mut ids: HashMap<&BitString, usize> = HashMap::new();
    let mut distinct: Vec<&BitString> = Vec::new();
    for law in &laws {
        for (msg, _) in law {
            ids.entry(msg).or_insert_with(|| {
                distinct.push(msg);
                distinct.len() - 1
            });
        }
    }

    let accepts: Vec<Vec<bool>> = distinct
        .par_iter()
        .map(|msg| {
            ys.iter()
                .map(|y| scheme.decide(y, msg).hypothesis == Hypothesis::H0)
                .collect()
        })
        .collect();

    let py_log: Vec<f64> = ys.iter().map(|y| y.log2_prob(model.py())).collect();
    // P_Y^n(acceptance region of each message): the H1 side does not depend on x
    let beta_of: Vec<f64> = accepts
        .par_iter()
        .map(|acc| {
            acc.iter()
                .zip(&py_log)
                .filter(|(&a, _)| a)
                .map(|(_, &l)| l.exp2())
                .sum()
        })
        .collect();

    let log_pxy: Vec<f64> = model.pxy().probs().iter().map(|p| p.log2()).collect();
    let per_x: Vec<PerX> = xs
        .par_iter()
        .zip(&laws)
        .map(|(x, law)| {
            let px = x.log2_prob(model.px()).exp2();
            let mut alpha = 0.0;
            let mut beta = 0.0;
            let mut len = 0.0;
            let mut len_sq = 0.0;
            let pyx: Vec<f64> = if px > 0.0 {
                ys.iter()
                    .map(|y| {
                        x.symbols()
                            .iter()
                            .zip(y.symbols())
                            .map(|(&a, &b)| log_pxy[a as usize * ny + b as usize])
                            .sum::<f64>()
                            .exp2()
                    })
                    .collect()
            } else {
                Vec::new()
            };
            for (msg, w) in law {
                let id = ids[msg];
                let rejected: f64 = accepts[id]
                    .iter()
                    .zip(&pyx)
                    .filter(|(&a, _)| !a)
                    .map(|(_, &p)| p)
                    .sum();
                alpha += w * rejected;
                beta += w * px * beta_of[id];
                let l = msg.len() as f64;
                len += w * px * l;
                len_sq += w * px * l * l;
            }
            PerX {
                alpha,
                beta,
                len,
                len_sq,
            }
        })
        .collect();

    // sequential sums keep the result independent of the thread count
    let mut t = PerX {
        alpha: 0.0,
        beta: 0.0,
        len: 0.0,
        len_sq: 0.0,
    };
    for p in &per_x {
        t.alpha += p.alpha;
        t.beta += p.beta;
        t.len += p.len;
        t.len_sq += p.len_sq;
    }
    Ok(ErrorReport {
        mode: ReportMode::Exact,
        n,
        num_trials: 0,
        alpha_hat: Some(t.alpha.clamp(0.0, 1.0)),
        alpha_ci: Some(0.0),
        beta_hat: Some(t.beta.clamp(0.0, 1.0)),
        beta_ci: Some(0.0),
        mean_len_bits: t.len,
        mean_len_ci: 0.0,
        len_variance: (t.len_sq - t.len * t.len).max(0.0),
    })
}
