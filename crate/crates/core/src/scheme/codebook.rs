use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Pmf, Sequence, MAX_SEQUENCE_ALPHABET};

/// Default cap on `size * n` stored symbols.
pub const CODEBOOK_GUARD: f64 = 5e7;

/// Draws one symbol from `cdf` (cumulative sums of a pmf).
pub(crate) fn sample_symbol<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> u8 {
    let u: f64 = rng.gen();
    cdf.iter()
        .position(|&c| u < c)
        .unwrap_or(cdf.len() - 1) as u8
}

pub(crate) fn cumulative(p: &Pmf) -> Vec<f64> {
    p.probs()
        .iter()
        .scan(0.0, |acc, &q| {
            *acc += q;
            Some(*acc)
        })
        .collect()
}

/// `⌊2^(n R)⌋` codewords of length `n`, entries i.i.d. `pu`, regenerated
/// bit-exactly from `(seed, pu, n, rate_bits)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodebookSpec", into = "CodebookSpec")]
pub struct Codebook {
    n: usize,
    rate_bits: f64,
    seed: u64,
    pu: Pmf,
    size: u64,
    symbols: Vec<u8>,
}

/// What a codebook is serialized as: enough to regenerate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodebookSpec {
    pub n: usize,
    pub rate_bits: f64,
    pub seed: u64,
    pub pu: Pmf,
}

impl TryFrom<CodebookSpec> for Codebook {
    type Error = Error;

    fn try_from(s: CodebookSpec) -> Result<Self> {
        Codebook::build(&s.pu, s.n, s.rate_bits, s.seed)
    }
}

impl From<Codebook> for CodebookSpec {
    fn from(c: Codebook) -> Self {
        CodebookSpec {
            n: c.n,
            rate_bits: c.rate_bits,
            seed: c.seed,
            pu: c.pu,
        }
    }
}

/// `⌊2^(n R)⌋`, at least one.
pub fn codebook_size(n: usize, rate_bits: f64) -> f64 {
    (n as f64 * rate_bits).exp2().floor().max(1.0)
}

impl Codebook {
    pub fn build(pu: &Pmf, n: usize, rate_bits: f64, seed: u64) -> Result<Self> {
        Codebook::build_guarded(pu, n, rate_bits, seed, CODEBOOK_GUARD)
    }

    pub fn build_guarded(pu: &Pmf, n: usize, rate_bits: f64, seed: u64, guard: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("blocklength must be positive".into()));
        }
        if !rate_bits.is_finite() || rate_bits < 0.0 {
            return Err(Error::Domain(format!("codebook rate {rate_bits} must be >= 0")));
        }
        if pu.alphabet_size() > MAX_SEQUENCE_ALPHABET {
            return Err(Error::Domain("auxiliary alphabet too large".into()));
        }
        let size = codebook_size(n, rate_bits);
        let estimate = size * n as f64;
        if estimate > guard {
            return Err(Error::GuardExceeded {
                what: "codebook",
                estimate,
                limit: guard,
            });
        }
        let size = size as u64;
        let cdf = cumulative(pu);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let symbols = (0..size as usize * n)
            .map(|_| sample_symbol(&cdf, &mut rng))
            .collect();
        Ok(Codebook {
            n,
            rate_bits,
            seed,
            pu: pu.clone(),
            size,
            symbols,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate_bits(&self) -> f64 {
        self.rate_bits
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn pu(&self) -> &Pmf {
        &self.pu
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Codeword `u^n(m)` for `1 <= m <= size`.
    pub fn codeword(&self, m: u64) -> Option<&[u8]> {
        if m == 0 || m > self.size {
            return None;
        }
        let start = (m as usize - 1) * self.n;
        Some(&self.symbols[start..start + self.n])
    }

    pub fn entry(&self, m: u64) -> Option<Sequence> {
        self.codeword(m)
            .map(|s| Sequence::new(self.pu.alphabet_size(), s.to_vec()).expect("valid symbols"))
    }

    pub fn entries(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.symbols.chunks(self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_law() {
        let pu = Pmf::uniform(2).unwrap();
        assert_eq!(Codebook::build(&pu, 10, 0.0, 1).unwrap().size(), 1);
        assert_eq!(Codebook::build(&pu, 10, 0.3, 1).unwrap().size(), 8);
        assert_eq!(Codebook::build(&pu, 8, 0.4387, 1).unwrap().size(), 11);
        let cb = Codebook::build(&pu, 4, 0.5, 3).unwrap();
        assert_eq!(cb.size(), 4);
        assert!(cb.codeword(0).is_none() && cb.codeword(5).is_none());
        assert_eq!(cb.entries().count(), 4);
        assert!(cb.entries().all(|e| e.len() == 4));
    }

    #[test]
    fn regenerates_from_seed() {
        let pu = Pmf::new(vec![0.2, 0.5, 0.3]).unwrap();
        let a = Codebook::build(&pu, 16, 0.5, 99).unwrap();
        let b = Codebook::build(&pu, 16, 0.5, 99).unwrap();
        assert_eq!(a.symbols, b.symbols);
        let c = Codebook::build(&pu, 16, 0.5, 100).unwrap();
        assert_ne!(a.symbols, c.symbols);
        assert!(a.symbols.iter().all(|&s| s < 3));
    }

    #[test]
    fn serialized_form_regenerates() {
        let pu = Pmf::new(vec![0.25, 0.75]).unwrap();
        let a = Codebook::build(&pu, 12, 0.4, 5).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert!(!json.contains("symbols"));
        let b: Codebook = serde_json::from_str(&json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn guard_refuses() {
        let pu = Pmf::uniform(2).unwrap();
        let e = Codebook::build(&pu, 100, 0.5, 0).unwrap_err();
        assert!(matches!(e, Error::GuardExceeded { estimate, .. } if estimate > 1e16));
    }

    #[test]
    fn point_mass_codebook() {
        let pu = Pmf::point(3, 2).unwrap();
        let cb = Codebook::build(&pu, 32, 0.1, 7).unwrap();
        assert!(cb.entries().flatten().all(|&s| s == 2));
    }
}
