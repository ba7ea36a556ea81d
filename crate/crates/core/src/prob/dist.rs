use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the total mass of a distribution.
pub const SUM_TOLERANCE: f64 = 1e-12;

fn check_entries(probs: &[f64], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} has an empty alphabet")));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidDistribution(format!(
                "{what} entry {i} = {p} is outside [0, 1]"
            )));
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {total:.15}, not 1"
        )));
    }
    Ok(())
}

/// A probability mass function over `{0, .., len-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_entries(&probs, "pmf")?;
        Ok(Pmf { probs })
    }

    /// Normalizes non-negative weights. This is the only constructor that
    /// rescales its input.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Pmf::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDistribution("uniform(0)".into()));
        }
        Ok(Pmf {
            probs: vec![1.0 / k as f64; k],
        })
    }

    pub fn point(k: usize, at: usize) -> Result<Self> {
        if at >= k {
            return Err(Error::InvalidDistribution(format!("point mass at {at} of {k}")));
        }
        let mut probs = vec![0.0; k];
        probs[at] = 1.0;
        Ok(Pmf { probs })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        Pmf::new(vec![1.0 - p, p])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// True when one symbol carries all of the mass.
    pub fn is_degenerate(&self) -> bool {
        self.probs.iter().any(|&p| p >= 1.0 - SUM_TOLERANCE)
    }
}

impl TryFrom<Vec<f64>> for Pmf {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl From<Pmf> for Vec<f64> {
    fn from(p: Pmf) -> Self {
        p.probs
    }
}

/// A joint pmf stored row-major: `get(r, c)` is the probability of
/// row symbol `r` together with column symbol `c`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct JointPmf {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
    /// Marginals known exactly (a joint type's come from integer counts);
    /// summing rounded cells could disagree with them in the last bit.
    marginals: Option<Box<(Pmf, Pmf)>>,
}

impl PartialEq for JointPmf {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.probs == other.probs
    }
}

impl JointPmf {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDistribution("joint pmf has an empty axis".into()));
        }
        if probs.len() != rows * cols {
            return Err(Error::InvalidDistribution(format!(
                "joint pmf of shape {rows}x{cols} given {} entries",
                probs.len()
            )));
        }
        check_entries(&probs, "joint pmf")?;
        Ok(JointPmf {
            rows,
            cols,
            probs,
            marginals: None,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidDistribution("ragged joint pmf rows".into()));
        }
        JointPmf::new(r, c, rows.into_iter().flatten().collect())
    }

    /// `p ⊗ q`
    pub fn product(p: &Pmf, q: &Pmf) -> Self {
        let probs = p
            .probs()
            .iter()
            .flat_map(|&a| q.probs().iter().map(move |&b| a * b))
            .collect();
        JointPmf {
            rows: p.alphabet_size(),
            cols: q.alphabet_size(),
            probs,
            marginals: Some(Box::new((p.clone(), q.clone()))),
        }
    }

    /// Doubly symmetric binary source: X uniform and Y = X xor Bern(p).
    pub fn dsbs(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("dsbs crossover {p} outside [0, 1]")));
        }
        JointPmf::new(
            2,
            2,
            vec![(1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0],
        )
    }

    pub fn row_alphabet(&self) -> usize {
        self.rows
    }

    pub fn col_alphabet(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.probs[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.probs[r * self.cols..(r + 1) * self.cols]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn row_marginal(&self) -> Pmf {
        if let Some(m) = &self.marginals {
            return m.0.clone();
        }
        Pmf {
            probs: (0..self.rows).map(|r| self.row(r).iter().sum()).collect(),
        }
    }

    pub fn col_marginal(&self) -> Pmf {
        if let Some(m) = &self.marginals {
            return m.1.clone();
        }
        let mut probs = vec![0.0; self.cols];
        for r in 0..self.rows {
            for (acc, &p) in probs.iter_mut().zip(self.row(r)) {
                *acc += p;
            }
        }
        Pmf { probs }
    }

    pub fn transpose(&self) -> Self {
        let mut probs = Vec::with_capacity(self.probs.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                probs.push(self.get(r, c));
            }
        }
        JointPmf {
            rows: self.cols,
            cols: self.rows,
            probs,
            marginals: self.marginals.as_ref().map(|m| Box::new((m.1.clone(), m.0.clone()))),
        }
    }

    /// The conditional law of the column symbol given each row symbol.
    /// Rows with zero mass get the column marginal, which keeps every row
    /// a valid pmf without affecting any expectation.
    pub fn conditional_rows(&self) -> Channel {
        let fallback = self.col_marginal();
        let rows = (0..self.rows)
            .map(|r| {
                let mass: f64 = self.row(r).iter().sum();
                if mass > 0.0 {
                    Pmf {
                        probs: self.row(r).iter().map(|p| p / mass).collect(),
                    }
                } else {
                    fallback.clone()
                }
            })
            .collect();
        Channel {
            out: self.cols,
            rows,
        }
    }

    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, probs: Vec<f64>) -> Self {
        JointPmf {
            rows,
            cols,
            probs,
            marginals: None,
        }
    }

    pub(crate) fn with_exact_marginals(mut self, row: Pmf, col: Pmf) -> Self {
        self.marginals = Some(Box::new((row, col)));
        self
    }
}

impl TryFrom<Vec<Vec<f64>>> for JointPmf {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        JointPmf::from_rows(v)
    }
}

impl From<JointPmf> for Vec<Vec<f64>> {
    fn from(j: JointPmf) -> Self {
        j.probs.chunks(j.cols).map(<[f64]>::to_vec).collect()
    }
}

/// A conditional pmf: row `x` is the output law given input `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Channel {
    out: usize,
    rows: Vec<Pmf>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let out = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || out == 0 {
            return Err(Error::InvalidDistribution("channel has an empty alphabet".into()));
        }
        if rows.iter().any(|r| r.len() != out) {
            return Err(Error::InvalidDistribution("ragged channel rows".into()));
        }
        let rows = rows.into_iter().map(Pmf::new).collect::<Result<Vec<_>>>()?;
        Ok(Channel { out, rows })
    }

    pub fn from_pmfs(rows: Vec<Pmf>) -> Result<Self> {
        let out = rows.first().map_or(0, Pmf::alphabet_size);
        if rows.is_empty() || rows.iter().any(|r| r.alphabet_size() != out) {
            return Err(Error::InvalidDistribution(
                "channel rows must share one output alphabet".into(),
            ));
        }
        Ok(Channel { out, rows })
    }

    /// `U = X` on `k` symbols.
    pub fn identity(k: usize) -> Result<Self> {
        Channel::identity_padded(k, k)
    }

    /// `U = X` embedded in a larger output alphabet; the extra output
    /// symbols are never used.
    pub fn identity_padded(k: usize, out: usize) -> Result<Self> {
        if out < k {
            return Err(Error::AlphabetMismatch(format!(
                "cannot embed {k} inputs into {out} outputs"
            )));
        }
        let rows = (0..k).map(|x| Pmf::point(out, x)).collect::<Result<_>>()?;
        Ok(Channel { out, rows })
    }

    /// Every input mapped to the same output law.
    pub fn constant(inputs: usize, row: &Pmf) -> Result<Self> {
        if inputs == 0 {
            return Err(Error::InvalidDistribution("channel with no inputs".into()));
        }
        Ok(Channel {
            out: row.alphabet_size(),
            rows: vec![row.clone(); inputs],
        })
    }

    /// Binary symmetric channel with crossover `q`.
    pub fn bsc(q: f64) -> Result<Self> {
        Channel::new(vec![vec![1.0 - q, q], vec![q, 1.0 - q]])
    }

    pub fn in_alphabet(&self) -> usize {
        self.rows.len()
    }

    pub fn out_alphabet(&self) -> usize {
        self.out
    }

    pub fn row(&self, x: usize) -> &Pmf {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Pmf] {
        &self.rows
    }

    /// `W(u | x)`
    pub fn get(&self, x: usize, u: usize) -> f64 {
        self.rows[x].get(u)
    }
}

impl TryFrom<Vec<Vec<f64>>> for Channel {
    type Error = Error;

    fn try_from(v: Vec<Vec<f64>>) -> Result<Self> {
        Channel::new(v)
    }
}

impl From<Channel> for Vec<Vec<f64>> {
    fn from(c: Channel) -> Self {
        c.rows.into_iter().map(Vec::from).collect()
    }
}
