use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::binary_entropy;

/// Finite-blocklength converse quantities: the typicality slack
/// `μ_n = n^(-1/3)` and the mass lower bound
/// `Δ_n = (1-ε-η)/(1-η) - |X| / (2 μ_n n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConverseDiagnostic {
    pub n: u64,
    pub epsilon: f64,
    pub eta: f64,
    pub x_alphabet: usize,
    pub mu_n: f64,
    pub delta_n: f64,
    /// Filled in when a rate has been audited against this diagnostic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_bound_satisfied: Option<bool>,
}

pub fn delta_n(epsilon: f64, eta: f64, n: u64, x_alphabet: usize) -> Result<ConverseDiagnostic> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Domain(format!("epsilon {epsilon} must lie in [0, 1)")));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta {eta} must lie in [0, 1)")));
    }
    if n == 0 || x_alphabet == 0 {
        return Err(Error::Domain("blocklength and alphabet must be positive".into()));
    }
    let nf = n as f64;
    let mu_n = nf.powf(-1.0 / 3.0);
    let delta_n = (1.0 - epsilon - eta) / (1.0 - eta) - x_alphabet as f64 / (2.0 * mu_n * nf);
    Ok(ConverseDiagnostic {
        n,
        epsilon,
        eta,
        x_alphabet,
        mu_n,
        delta_n,
        rate_bound_satisfied: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ConverseCheck {
    Satisfied { bound: f64 },
    Violated { bound: f64 },
    Inapplicable { reason: String },
}

impl ConverseCheck {
    pub fn passed(&self) -> Option<bool> {
        match self {
            ConverseCheck::Satisfied { .. } => Some(true),
            ConverseCheck::Violated { .. } => Some(false),
            ConverseCheck::Inapplicable { .. } => None,
        }
    }
}

/// Evaluates the single-letter rate bound every code must satisfy,
///
/// ```text
/// R >= Δ_n (I(U;X) + log2(Δ_n)/n) / (1 + h_b(Δ_n / (nR))),
/// ```
///
/// for a candidate `I(U;X)`. Inapplicable when `Δ_n <= 0`, `R <= 0`, or
/// `Δ_n/(nR) > 1`.
pub fn converse_rate_check(i_ux: f64, rate: f64, diag: &ConverseDiagnostic) -> ConverseCheck {
    if diag.delta_n <= 0.0 {
        return ConverseCheck::Inapplicable {
            reason: format!("delta_n = {} <= 0 at n = {}", diag.delta_n, diag.n),
        };
    }
    if rate <= 0.0 {
        return ConverseCheck::Inapplicable {
            reason: "rate must be positive".into(),
        };
    }
    let n = diag.n as f64;
    let ratio = diag.delta_n / (n * rate);
    let Ok(hb) = binary_entropy(ratio) else {
        return ConverseCheck::Inapplicable {
            reason: format!("delta_n / (nR) = {ratio} exceeds 1"),
        };
    };
    let bound = (i_ux + diag.delta_n.log2() / n) / (1.0 + hb) * diag.delta_n;
    if rate >= bound {
        ConverseCheck::Satisfied { bound }
    } else {
        ConverseCheck::Violated { bound }
    }
}
