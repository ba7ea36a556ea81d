//! The skip set: typical source sequences for which the encoder sends only the
//! flag bit.
//!
//! Typical sequences are ordered by descending `P_X^n` probability, ties broken
//! lexicographically, and taken greedily while the running mass stays within
//! the target. All sequences of one type share a probability, so the set is
//! held intensionally as "the first `full_levels` probability levels plus the
//! lexicographically first `k` sequences of the next one". For small
//! `|X|^n` the set is also materialized as a bitmap over sequence indices.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::prob::{Pmf, Sequence, Typicality};

/// Largest `|X|^n` for which membership is materialized.
pub const MATERIALIZE_GUARD: f64 = (1u64 << 24) as f64;

/// Largest number of type classes enumerated.
pub const TYPE_CLASS_GUARD: f64 = 2e6;

/// Relative tolerance under which two per-sequence log-probabilities are one
/// level.
const LEVEL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
struct Level {
    log2_prob: f64,
    classes: Vec<Vec<u32>>,
    size: BigUint,
}

impl Level {
    fn prob(&self) -> f64 {
        self.log2_prob.exp2()
    }

    fn size_f64(&self) -> f64 {
        self.size.to_f64().unwrap_or(f64::INFINITY)
    }
}

#[derive(Clone, Debug)]
pub struct SkipSet {
    n: usize,
    px: Pmf,
    mu: f64,
    target_mass: f64,
    achieved_mass: f64,
    typical_mass: f64,
    levels: Vec<Level>,
    level_of: HashMap<Vec<u32>, usize>,
    full_levels: usize,
    partial: BigUint,
    factorials: Vec<BigUint>,
    bitmap: Option<Vec<u64>>,
}

fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(left - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

fn multinomial(factorials: &[BigUint], counts: &[u32]) -> BigUint {
    let n: u32 = counts.iter().sum();
    let mut denom = BigUint::from(1u32);
    for &c in counts {
        denom *= &factorials[c as usize];
    }
    &factorials[n as usize] / denom
}

impl SkipSet {
    pub fn build(px: &Pmf, n: usize, mu: f64, target_mass: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("blocklength must be positive".into()));
        }
        if !(0.0..1.0).contains(&target_mass) {
            return Err(Error::Domain(format!(
                "skip-set target mass {target_mass} must lie in [0, 1)"
            )));
        }
        let k = px.alphabet_size();
        let typ = Typicality::new(px, mu)?;
        let mut classes_estimate = 1.0f64;
        for i in 1..k {
            classes_estimate = classes_estimate * (n + i) as f64 / i as f64;
        }
        if classes_estimate > TYPE_CLASS_GUARD {
            return Err(Error::GuardExceeded {
                what: "skip-set type classes",
                estimate: classes_estimate,
                limit: TYPE_CLASS_GUARD,
            });
        }

        let mut factorials = vec![BigUint::from(1u32)];
        for i in 1..=n {
            let next = &factorials[i - 1] * BigUint::from(i);
            factorials.push(next);
        }

        let logp: Vec<f64> = px.probs().iter().map(|p| p.log2()).collect();
        let mut typical: Vec<(f64, Vec<u32>)> = compositions(n as u32, k)
            .into_iter()
            .filter(|c| typ.check_counts(c, n))
            .filter(|c| c.iter().zip(px.probs()).all(|(&ci, &p)| ci == 0 || p > 0.0))
            .map(|c| {
                let lp = c
                    .iter()
                    .zip(&logp)
                    .filter(|(&ci, _)| ci > 0)
                    .map(|(&ci, &l)| ci as f64 * l)
                    .sum();
                (lp, c)
            })
            .collect();
        typical.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));

        let mut levels: Vec<Level> = Vec::new();
        for (lp, c) in typical {
            let size = multinomial(&factorials, &c);
            match levels.last_mut() {
                Some(l) if (l.log2_prob - lp).abs() <= LEVEL_TOLERANCE * l.log2_prob.abs().max(1.0) => {
                    l.size += size;
                    l.classes.push(c);
                }
                _ => levels.push(Level {
                    log2_prob: lp,
                    classes: vec![c],
                    size,
                }),
            }
        }
        let mut level_of = HashMap::new();
        for (i, l) in levels.iter().enumerate() {
            for c in &l.classes {
                level_of.insert(c.clone(), i);
            }
        }
        let typical_mass = levels.iter().map(|l| l.size_f64() * l.prob()).sum();

        let mut achieved = 0.0f64;
        let mut full_levels = 0;
        let mut partial = BigUint::zero();
        for l in &levels {
            let p = l.prob();
            let mass = l.size_f64() * p;
            if achieved + mass <= target_mass {
                achieved += mass;
                full_levels += 1;
                continue;
            }
            let mut take = ((target_mass - achieved) / p).floor().max(0.0);
            while take > 0.0 && achieved + take * p > target_mass {
                take -= 1.0;
            }
            partial = BigUint::from_f64(take).unwrap_or_default();
            achieved += take * p;
            break;
        }

        let mut set = SkipSet {
            n,
            px: px.clone(),
            mu,
            target_mass,
            achieved_mass: achieved,
            typical_mass,
            levels,
            level_of,
            full_levels,
            partial,
            factorials,
            bitmap: None,
        };
        let space = (k as f64).powi(n as i32);
        if space <= MATERIALIZE_GUARD {
            set.materialize(space as u64);
        }
        Ok(set)
    }

    fn materialize(&mut self, space: u64) {
        let k = self.px.alphabet_size();
        let mut bits = vec![0u64; space.div_ceil(64) as usize];
        let mut remaining = self.partial.to_u64().unwrap_or(u64::MAX);
        let mut counts = vec![0u32; k];
        for idx in 0..space {
            counts.iter_mut().for_each(|c| *c = 0);
            let mut v = idx;
            for _ in 0..self.n {
                counts[(v % k as u64) as usize] += 1;
                v /= k as u64;
            }
            let Some(&lvl) = self.level_of.get(&counts) else {
                continue;
            };
            let member = if lvl < self.full_levels {
                true
            } else if lvl == self.full_levels && remaining > 0 {
                remaining -= 1;
                true
            } else {
                false
            };
            if member {
                bits[(idx / 64) as usize] |= 1 << (idx % 64);
            }
        }
        self.bitmap = Some(bits);
    }

    /// Number of sequences of `level` lexicographically smaller than `x`.
    fn lex_rank(&self, x: &[u8], level: &Level) -> BigUint {
        let mut rank = BigUint::zero();
        for class in &level.classes {
            let mut left = class.clone();
            for &xi in x {
                for s in 0..xi as usize {
                    if left[s] > 0 {
                        left[s] -= 1;
                        rank += multinomial(&self.factorials, &left);
                        left[s] += 1;
                    }
                }
                if left[xi as usize] == 0 {
                    break;
                }
                left[xi as usize] -= 1;
            }
        }
        rank
    }

    /// Membership by the intensional rule, ignoring any bitmap.
    pub fn contains_by_rule(&self, x: &Sequence) -> bool {
        let Some(&lvl) = self.level_of.get(&x.counts()) else {
            return false;
        };
        if lvl < self.full_levels {
            return true;
        }
        if lvl > self.full_levels || self.partial.is_zero() {
            return false;
        }
        self.lex_rank(x.symbols(), &self.levels[lvl]) < self.partial
    }

    pub fn contains(&self, x: &Sequence) -> bool {
        if x.len() != self.n || x.alphabet() != self.px.alphabet_size() {
            return false;
        }
        match &self.bitmap {
            Some(bits) => {
                let idx = x.index();
                bits[(idx / 64) as usize] >> (idx % 64) & 1 == 1
            }
            None => self.contains_by_rule(x),
        }
    }

    /// All members in lexicographic order; only for materialized sets.
    pub fn members(&self) -> Result<Vec<Sequence>> {
        let Some(bits) = &self.bitmap else {
            let space = (self.px.alphabet_size() as f64).powi(self.n as i32);
            return Err(Error::GuardExceeded {
                what: "skip-set materialization",
                estimate: space,
                limit: MATERIALIZE_GUARD,
            });
        };
        let k = self.px.alphabet_size();
        let mut out = Vec::new();
        for (w, &word) in bits.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let b = rest.trailing_zeros() as u64;
                out.push(Sequence::from_index(k, self.n, w as u64 * 64 + b));
                rest &= rest - 1;
            }
        }
        Ok(out)
    }

    /// Number of members, as a float since it can be astronomically large.
    pub fn len(&self) -> f64 {
        let full: f64 = self.levels[..self.full_levels].iter().map(Level::size_f64).sum();
        full + self.partial.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn is_empty(&self) -> bool {
        self.full_levels == 0 && self.partial.is_zero()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn target_mass(&self) -> f64 {
        self.target_mass
    }

    /// Exact `P_X^n` mass of the members.
    pub fn achieved_mass(&self) -> f64 {
        self.achieved_mass
    }

    /// `P_X^n` mass of the whole typical set.
    pub fn typical_mass(&self) -> f64 {
        self.typical_mass
    }

    /// The target could not be reached even with every typical sequence.
    pub fn shortfall(&self) -> bool {
        self.full_levels == self.levels.len() && self.typical_mass < self.target_mass
    }

    pub fn is_materialized(&self) -> bool {
        self.bitmap.is_some()
    }
}
