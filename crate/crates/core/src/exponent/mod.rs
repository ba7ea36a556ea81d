//! The optimal type-II exponent under an expected-rate constraint,
//!
//! ```text
//! θ*_ε(R) = max { I(U;Y) : P_{U|X} with R >= (1-ε) I(U;X) },   U - X - Y,
//! ```
//!
//! together with the finite-blocklength converse quantities used to audit
//! solver output.

mod converse;
mod eval;
mod grid;
mod model;
mod solver;

use serde::{Deserialize, Serialize};

pub use converse::{converse_rate_check, delta_n, ConverseCheck, ConverseDiagnostic};
pub use grid::{grid_oracle, GridOptions, GRID_GUARD};
pub use model::{objective, ExponentQuery, SourceModel};
pub use solver::{solve_exponent, sweep_curve, SolverOptions};

use crate::error::Result;
use crate::prob::Channel;

/// Largest epsilon used internally; `ε = 1` itself is rejected.
pub const EPSILON_CAP: f64 = 1.0 - 1e-9;

/// Slack on `I(U;X) <= R / (1-ε)` so that channels sitting exactly on the
/// constraint are not rejected by round-off.
pub const FEASIBILITY_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentResult {
    pub epsilon: f64,
    pub rate: f64,
    /// `I(U;Y)` of `best_channel`, in bits per symbol.
    pub theta: f64,
    pub best_channel: Channel,
    pub i_ux: f64,
    pub i_uy: f64,
    pub u_alphabet: usize,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl ExponentResult {
    /// `R - (1-ε) I(U;X)`; non-negative up to solver slack.
    pub fn feasible_margin(&self) -> f64 {
        self.rate - (1.0 - self.epsilon) * self.i_ux
    }
}

/// Builds the reported result, recomputing both informations through the
/// public `objective` so that every producer reports identically.
fn finish(
    model: &SourceModel,
    query: &ExponentQuery,
    mut w: Vec<f64>,
    nu: usize,
    converged: bool,
    warning: Option<String>,
) -> Result<ExponentResult> {
    eval::clean_rows(&mut w, nu);
    let rows = w.chunks(nu).map(<[f64]>::to_vec).collect();
    let best_channel = Channel::new(rows)?;
    let (i_ux, i_uy) = objective(model, &best_channel)?;
    Ok(ExponentResult {
        epsilon: query.epsilon,
        rate: query.rate,
        theta: i_uy,
        best_channel,
        i_ux,
        i_uy,
        u_alphabet: nu,
        converged,
        warning,
    })
}

/// CSV rows `rate, epsilon, theta_bits, i_ux, i_uy, feasible_margin`.
pub fn write_curve_csv<W: std::io::Write>(out: W, curve: &[ExponentResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rate", "epsilon", "theta_bits", "i_ux", "i_uy", "feasible_margin"])?;
    for r in curve {
        w.write_record([
            r.rate.to_string(),
            r.epsilon.to_string(),
            r.theta.to_string(),
            r.i_ux.to_string(),
            r.i_uy.to_string(),
            r.feasible_margin().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
