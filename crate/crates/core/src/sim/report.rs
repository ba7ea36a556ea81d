use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportMode {
    MonteCarlo,
    Exact,
}

/// Type-I/type-II error probabilities and message length of one scheme.
///
/// An error side is `None` when its hypothesis was not simulated. Exact
/// reports carry zero-width intervals and `num_trials = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub mode: ReportMode,
    pub n: usize,
    pub num_trials: u64,
    pub alpha_hat: Option<f64>,
    pub alpha_ci: Option<f64>,
    pub beta_hat: Option<f64>,
    pub beta_ci: Option<f64>,
    pub mean_len_bits: f64,
    pub mean_len_ci: f64,
    pub len_variance: f64,
}

impl ErrorReport {
    /// Standard error of `mean_len_bits` (zero in exact mode).
    pub fn mean_len_std_error(&self) -> f64 {
        match self.mode {
            ReportMode::Exact => 0.0,
            ReportMode::MonteCarlo => {
                let sides = self.alpha_hat.is_some() as u64 + self.beta_hat.is_some() as u64;
                let draws = (self.num_trials * sides).max(1) as f64;
                (self.len_variance / draws).sqrt()
            }
        }
    }
}

/// Exact `β_n` over several blocklengths, one codebook realization per `n`,
/// with the least-squares slope of `-log2 β_n` against `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub n_values: Vec<usize>,
    pub beta_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub mean_len_values: Vec<f64>,
    pub codebook_seeds: Vec<u64>,
    /// Blocklengths dropped from the fit because `β_n = 0`.
    pub excluded_n: Vec<usize>,
    /// `NaN` is never stored; a single usable point gives `-log2(β_n)/n`.
    pub slope_bits: f64,
    pub theory_theta: f64,
}

impl ExponentEstimate {
    /// `-log2(β_n)/n` for each retained blocklength.
    pub fn normalized_exponents(&self) -> Vec<f64> {
        self.n_values
            .iter()
            .zip(&self.beta_values)
            .map(|(&n, &b)| -b.log2() / n as f64)
            .collect()
    }
}

/// One row of the append-mode results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: usize,
    pub mode: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub mean_len_bits: Option<f64>,
    pub theta_theory: Option<f64>,
    pub slope_bits: Option<f64>,
    pub seed: u64,
}

pub const CSV_HEADER: [&str; 8] = [
    "n",
    "mode",
    "alpha",
    "beta",
    "mean_len_bits",
    "theta_theory",
    "slope_bits",
    "seed",
];

impl CsvRow {
    pub fn from_report(r: &ErrorReport, theta_theory: Option<f64>, seed: u64) -> Self {
        CsvRow {
            n: r.n,
            mode: match r.mode {
                ReportMode::MonteCarlo => "monte-carlo".into(),
                ReportMode::Exact => "exact".into(),
            },
            alpha: r.alpha_hat,
            beta: r.beta_hat,
            mean_len_bits: Some(r.mean_len_bits),
            theta_theory,
            slope_bits: None,
            seed,
        }
    }

    /// One row per retained blocklength, each carrying the shared slope.
    pub fn from_estimate(e: &ExponentEstimate, seed: u64) -> Vec<Self> {
        (0..e.n_values.len())
            .map(|i| CsvRow {
                n: e.n_values[i],
                mode: "exact".into(),
                alpha: Some(e.alpha_values[i]),
                beta: Some(e.beta_values[i]),
                mean_len_bits: Some(e.mean_len_values[i]),
                theta_theory: Some(e.theory_theta),
                slope_bits: Some(e.slope_bits),
                seed,
            })
            .collect()
    }
}

/// Writes `rows`, preceded by the header when `with_header` is set (a fresh
/// file); appending to an existing table passes `false`.
pub fn write_csv_rows<W: Write>(out: W, rows: &[CsvRow], with_header: bool) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    if with_header {
        w.write_record(CSV_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
