use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{mutual_information, push_to_uy, compose, Channel, JointPmf, Pmf};

/// `P_XY` under the null hypothesis. The alternative is always the product
/// of its marginals, so it is not stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointPmf", into = "JointPmf")]
pub struct SourceModel {
    pxy: JointPmf,
    px: Pmf,
    py: Pmf,
}

impl SourceModel {
    pub fn new(pxy: JointPmf) -> Self {
        let px = pxy.row_marginal();
        let py = pxy.col_marginal();
        SourceModel { pxy, px, py }
    }

    pub fn dsbs(p: f64) -> Result<Self> {
        Ok(SourceModel::new(JointPmf::dsbs(p)?))
    }

    pub fn pxy(&self) -> &JointPmf {
        &self.pxy
    }

    pub fn px(&self) -> &Pmf {
        &self.px
    }

    pub fn py(&self) -> &Pmf {
        &self.py
    }

    pub fn x_alphabet(&self) -> usize {
        self.px.alphabet_size()
    }

    pub fn y_alphabet(&self) -> usize {
        self.py.alphabet_size()
    }

    /// `I(X;Y)` under the null hypothesis; the exponent can never exceed it.
    pub fn mutual_information(&self) -> f64 {
        mutual_information(&self.pxy)
    }

    /// `P_X ⊗ P_Y`
    pub fn alternative(&self) -> JointPmf {
        JointPmf::product(&self.px, &self.py)
    }

    /// Either marginal deterministic, so `I(X;Y) = 0`.
    pub fn is_degenerate(&self) -> bool {
        self.px.is_degenerate() || self.py.is_degenerate()
    }
}

impl TryFrom<JointPmf> for SourceModel {
    type Error = Error;

    fn try_from(pxy: JointPmf) -> Result<Self> {
        Ok(SourceModel::new(pxy))
    }
}

impl From<SourceModel> for JointPmf {
    fn from(m: SourceModel) -> Self {
        m.pxy
    }
}

/// Type-I budget and expected rate (bits per source symbol).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentQuery {
    pub epsilon: f64,
    pub rate: f64,
}

impl ExponentQuery {
    pub fn new(epsilon: f64, rate: f64) -> Result<Self> {
        let q = ExponentQuery { epsilon, rate };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::Domain(format!(
                "epsilon {} must lie in [0, 1)",
                self.epsilon
            )));
        }
        if !self.rate.is_finite() || self.rate < 0.0 {
            return Err(Error::Domain(format!("rate {} must be >= 0", self.rate)));
        }
        Ok(())
    }

    /// Largest `I(U;X)` the constraint `R >= (1-ε) I(U;X)` admits.
    pub fn mutual_information_budget(&self) -> f64 {
        self.rate / (1.0 - self.epsilon.min(super::EPSILON_CAP))
    }
}

/// `(I(U;X), I(U;Y))` for the test channel `P_{U|X}` under `U - X - Y`.
pub fn objective(model: &SourceModel, ch: &Channel) -> Result<(f64, f64)> {
    let ux = compose(model.px(), ch)?;
    let uy = push_to_uy(model.pxy(), ch)?;
    Ok((mutual_information(&ux), mutual_information(&uy)))
}
