use serde::{Deserialize, Serialize};

use super::dist::{JointPmf, Pmf};
use crate::error::{Error, Result};

/// Symbols are stored as bytes, so sequence alphabets are capped here.
pub const MAX_SEQUENCE_ALPHABET: usize = 256;

/// Slack added to the inclusive ℓ1 boundary so that types sitting exactly on
/// it are not lost to rounding.
const BOUNDARY_SLACK: f64 = 1e-12;

/// A finite string of symbols from `{0, .., alphabet-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sequence {
    alphabet: usize,
    symbols: Vec<u8>,
}

impl Sequence {
    pub fn new(alphabet: usize, symbols: Vec<u8>) -> Result<Self> {
        if alphabet == 0 || alphabet > MAX_SEQUENCE_ALPHABET {
            return Err(Error::Domain(format!(
                "sequence alphabet {alphabet} outside 1..={MAX_SEQUENCE_ALPHABET}"
            )));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= alphabet) {
            return Err(Error::Domain(format!(
                "symbol {s} outside alphabet of size {alphabet}"
            )));
        }
        Ok(Sequence { alphabet, symbols })
    }

    /// Writes the base-`alphabet` digits of `index`, most significant first.
    pub fn from_index(alphabet: usize, n: usize, mut index: u64) -> Self {
        let mut symbols = vec![0u8; n];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % alphabet as u64) as u8;
            index /= alphabet as u64;
        }
        Sequence { alphabet, symbols }
    }

    /// Inverse of [`Sequence::from_index`].
    pub fn index(&self) -> u64 {
        self.symbols
            .iter()
            .fold(0u64, |acc, &s| acc * self.alphabet as u64 + s as u64)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Symbol counts, one per alphabet letter.
    pub fn counts(&self) -> Vec<u32> {
        let mut c = vec![0u32; self.alphabet];
        for &s in &self.symbols {
            c[s as usize] += 1;
        }
        c
    }

    /// `log2 P^n(self)` for an i.i.d. source `p`.
    pub fn log2_prob(&self, p: &Pmf) -> f64 {
        self.symbols.iter().map(|&s| p.get(s as usize).log2()).sum()
    }
}

pub fn empirical_type(s: &Sequence) -> Result<Pmf> {
    if s.is_empty() {
        return Err(Error::Domain("type of an empty sequence".into()));
    }
    let n = s.len() as f64;
    Pmf::new(s.counts().into_iter().map(|c| c as f64 / n).collect())
}

/// Joint type with rows indexed by the symbols of `a`.
pub fn joint_type(a: &Sequence, b: &Sequence) -> Result<JointPmf> {
    if a.is_empty() {
        return Err(Error::Domain("joint type of empty sequences".into()));
    }
    if a.len() != b.len() {
        return Err(Error::Domain(format!(
            "joint type of sequences with lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let cols = b.alphabet();
    let mut counts = vec![0u32; a.alphabet() * cols];
    for (&x, &y) in a.symbols().iter().zip(b.symbols()) {
        counts[x as usize * cols + y as usize] += 1;
    }
    let n = a.len() as f64;
    let joint = JointPmf::new(
        a.alphabet(),
        cols,
        counts.iter().map(|&c| c as f64 / n).collect(),
    )?;
    Ok(joint.with_exact_marginals(empirical_type(a)?, empirical_type(b)?))
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Whether the type of `s` lies within ℓ1 distance `mu` of `p` (inclusive).
pub fn is_typical(s: &Sequence, p: &Pmf, mu: f64) -> Result<bool> {
    Typicality::new(p, mu)?.check(s)
}

pub fn is_jointly_typical(a: &Sequence, b: &Sequence, j: &JointPmf, mu: f64) -> Result<bool> {
    JointTypicality::new(j, mu)?.check(a, b)
}

fn check_mu(mu: f64) -> Result<()> {
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::Domain(format!("typicality slack {mu} must be >= 0")));
    }
    Ok(())
}

/// Reusable ℓ1-typicality test against a fixed reference pmf.
#[derive(Clone, Debug)]
pub struct Typicality {
    reference: Vec<f64>,
    mu: f64,
}

impl Typicality {
    pub fn new(p: &Pmf, mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(Typicality {
            reference: p.probs().to_vec(),
            mu,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn check(&self, s: &Sequence) -> Result<bool> {
        if s.is_empty() {
            return Err(Error::Domain("typicality of an empty sequence".into()));
        }
        if s.alphabet() != self.reference.len() {
            return Err(Error::AlphabetMismatch(format!(
                "sequence alphabet {} against pmf of {} symbols",
                s.alphabet(),
                self.reference.len()
            )));
        }
        Ok(self.check_counts(&s.counts(), s.len()))
    }

    /// Typicality of a type given by its counts over `n` symbols.
    pub fn check_counts(&self, counts: &[u32], n: usize) -> bool {
        let n = n as f64;
        let d: f64 = counts
            .iter()
            .zip(&self.reference)
            .map(|(&c, &p)| (c as f64 / n - p).abs())
            .sum();
        d <= self.mu + BOUNDARY_SLACK
    }
}

/// Reusable joint ℓ1-typicality test; rows of the reference index the first
/// sequence.
#[derive(Clone, Debug)]
pub struct JointTypicality {
    rows: usize,
    cols: usize,
    reference: Vec<f64>,
    mu: f64,
}

impl JointTypicality {
    pub fn new(j: &JointPmf, mu: f64) -> Result<Self> {
        check_mu(mu)?;
        Ok(JointTypicality {
            rows: j.row_alphabet(),
            cols: j.col_alphabet(),
            reference: j.probs().to_vec(),
            mu,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn check(&self, a: &Sequence, b: &Sequence) -> Result<bool> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Domain(format!(
                "joint typicality needs equal non-empty lengths, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a.alphabet() != self.rows || b.alphabet() != self.cols {
            return Err(Error::AlphabetMismatch(format!(
                "sequence alphabets ({}, {}) against a {}x{} joint pmf",
                a.alphabet(),
                b.alphabet(),
                self.rows,
                self.cols
            )));
        }
        Ok(self.check_symbols(a.symbols(), b.symbols()))
    }

    /// Unchecked variant for hot loops: both slices must have the same
    /// non-zero length and symbols within the reference alphabets.
    pub(crate) fn check_symbols(&self, a: &[u8], b: &[u8]) -> bool {
        let mut counts = [0u32; 64];
        let cells = self.rows * self.cols;
        let mut heap;
        let counts: &mut [u32] = if cells <= counts.len() {
            &mut counts[..cells]
        } else {
            heap = vec![0u32; cells];
            &mut heap
        };
        for (&x, &y) in a.iter().zip(b) {
            counts[x as usize * self.cols + y as usize] += 1;
        }
        let n = a.len() as f64;
        let d: f64 = counts
            .iter()
            .zip(&self.reference)
            .map(|(&c, &p)| (c as f64 / n - p).abs())
            .sum();
        d <= self.mu + BOUNDARY_SLACK
    }
}
