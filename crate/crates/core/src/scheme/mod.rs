//! The variable-length achievability scheme: a random covering codebook, a
//! skip set answered with the flag bit `[0]`, and a joint-typicality detector.

mod codebook;
mod codec;
mod skipset;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

pub(crate) use codebook::{cumulative, sample_symbol};
pub use codebook::{codebook_size, Codebook, CodebookSpec, CODEBOOK_GUARD};
pub use codec::{
    index_length, read_message, string_decode, string_encode, write_message,
    BitString,
};
pub use skipset::{SkipSet, MATERIALIZE_GUARD, TYPE_CLASS_GUARD};

use crate::error::{Error, Result};
use crate::exponent::{objective, SourceModel};
use crate::prob::{compose, push_to_uy, Channel, JointTypicality, Sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncoderMode {
    /// Pick uniformly among all jointly typical codewords.
    #[default]
    UniformRandom,
    /// Always the smallest matching index; deterministic.
    SmallestIndex,
}

/// Something the detector noticed on the way to its decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecisionNote {
    Malformed,
    IndexBeyondCodebook(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub hypothesis: Hypothesis,
    pub note: Option<DecisionNote>,
}

/// `max(0.05, n^(-1/3))`, clipped to `ε/2` when that would reach `ε`.
pub fn default_mu(n: usize, epsilon: f64) -> f64 {
    let mu = (n as f64).powf(-1.0 / 3.0).max(0.05);
    if mu < epsilon {
        mu
    } else {
        epsilon / 2.0
    }
}

/// `s + (1 - s) n (I(U;X) + μ)`, where `s` is the skip-set target `ε - μ`:
/// one bit on the skip set, at most `n (I(U;X) + μ)` bits elsewhere.
pub fn expected_length_bound(n: usize, skip_mass: f64, i_ux: f64, mu: f64) -> f64 {
    skip_mass + (1.0 - skip_mass) * n as f64 * (i_ux + mu)
}

/// An encoder/detector pair run on blocks of length `n`.
///
/// The harness only sees schemes through this trait, so degenerate schemes
/// can be measured exactly like the real one.
pub trait Scheme: Sync {
    fn model(&self) -> &SourceModel;

    fn blocklength(&self) -> usize;

    fn encode(&self, x: &Sequence, rng: &mut dyn RngCore) -> BitString;

    /// Law of the message given `x`, as `(message, probability)` pairs.
    fn message_law(&self, x: &Sequence) -> Vec<(BitString, f64)>;

    fn decide(&self, y: &Sequence, msg: &BitString) -> Decision;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub n: usize,
    pub epsilon: f64,
    pub mu: f64,
    pub codebook_seed: u64,
    #[serde(default)]
    pub encoder_mode: EncoderMode,
    /// Overrides the covering rate `I(U;X) + μ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codebook_rate: Option<f64>,
    /// Overrides the skip-set target `max(ε - μ, 0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_mass: Option<f64>,
    #[serde(default = "default_codebook_guard")]
    pub codebook_guard: f64,
}

fn default_codebook_guard() -> f64 {
    CODEBOOK_GUARD
}

impl SchemeConfig {
    pub fn new(n: usize, epsilon: f64, mu: f64, codebook_seed: u64) -> Self {
        SchemeConfig {
            n,
            epsilon,
            mu,
            codebook_seed,
            encoder_mode: EncoderMode::default(),
            codebook_rate: None,
            skip_mass: None,
            codebook_guard: CODEBOOK_GUARD,
        }
    }

    pub fn with_mode(mut self, mode: EncoderMode) -> Self {
        self.encoder_mode = mode;
        self
    }
}

/// A fully built scheme instance.
#[derive(Clone, Debug)]
pub struct SchemeParams {
    model: SourceModel,
    test_channel: Channel,
    config: SchemeConfig,
    i_ux: f64,
    i_uy: f64,
    codebook: Codebook,
    skip_set: SkipSet,
    ux_typical: JointTypicality,
    uy_typical: JointTypicality,
}

impl SchemeParams {
    pub fn build(model: &SourceModel, test_channel: &Channel, config: SchemeConfig) -> Result<Self> {
        let c = &config;
        if c.n == 0 {
            return Err(Error::Domain("blocklength must be positive".into()));
        }
        if !(0.0..1.0).contains(&c.epsilon) {
            return Err(Error::Domain(format!("epsilon {} must lie in [0, 1)", c.epsilon)));
        }
        if !(c.mu > 0.0 && c.mu.is_finite()) {
            return Err(Error::Domain(format!("mu {} must be positive", c.mu)));
        }
        let pux = compose(model.px(), test_channel)?;
        let puy = push_to_uy(model.pxy(), test_channel)?;
        let (i_ux, i_uy) = objective(model, test_channel)?;
        let pu = pux.row_marginal();
        let rate = c.codebook_rate.unwrap_or(i_ux + c.mu);
        let codebook = Codebook::build_guarded(&pu, c.n, rate, c.codebook_seed, c.codebook_guard)?;
        let target = c.skip_mass.unwrap_or((c.epsilon - c.mu).max(0.0));
        let skip_set = SkipSet::build(model.px(), c.n, c.mu, target)?;
        Ok(SchemeParams {
            model: model.clone(),
            test_channel: test_channel.clone(),
            ux_typical: JointTypicality::new(&pux, c.mu)?,
            uy_typical: JointTypicality::new(&puy, c.mu)?,
            config,
            i_ux,
            i_uy,
            codebook,
            skip_set,
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.config
    }

    pub fn model(&self) -> &SourceModel {
        &self.model
    }

    pub fn test_channel(&self) -> &Channel {
        &self.test_channel
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn skip_set(&self) -> &SkipSet {
        &self.skip_set
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn epsilon(&self) -> f64 {
        self.config.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.config.mu
    }

    pub fn i_ux(&self) -> f64 {
        self.i_ux
    }

    /// `I(U;Y)`: the exponent this test channel targets.
    pub fn i_uy(&self) -> f64 {
        self.i_uy
    }

    /// The expected rate this scheme is designed for,
    /// `R = (1 - ε + μ) I(U;X) + μ`.
    pub fn design_rate(&self) -> f64 {
        (1.0 - self.config.epsilon + self.config.mu) * self.i_ux + self.config.mu
    }

    pub fn expected_length_bound(&self) -> f64 {
        expected_length_bound(self.config.n, self.skip_set.target_mass(), self.i_ux, self.config.mu)
    }

    fn check_input(&self, s: &Sequence, alphabet: usize, what: &str) -> Result<()> {
        if s.len() != self.config.n || s.alphabet() != alphabet {
            return Err(Error::Domain(format!(
                "{what} must have length {} over {alphabet} symbols, got length {} over {}",
                self.config.n,
                s.len(),
                s.alphabet()
            )));
        }
        Ok(())
    }

    /// All `m` with `(u^n(m), x)` jointly typical, ascending.
    pub fn matching_indices(&self, x: &Sequence) -> Vec<u64> {
        (1..=self.codebook.size())
            .filter(|&m| {
                let u = self.codebook.codeword(m).expect("index within codebook");
                self.ux_typical.check_symbols(u, x.symbols())
            })
            .collect()
    }

    pub fn encode<R: Rng + ?Sized>(&self, x: &Sequence, rng: &mut R) -> Result<BitString> {
        self.check_input(x, self.model.x_alphabet(), "source sequence")?;
        if self.skip_set.contains(x) {
            return Ok(BitString::flag());
        }
        let matches = self.matching_indices(x);
        let m = match (matches.as_slice(), self.config.encoder_mode) {
            ([], _) => return Ok(BitString::flag()),
            ([first, ..], EncoderMode::SmallestIndex) => *first,
            (all, EncoderMode::UniformRandom) => all[rng.gen_range(0..all.len())],
        };
        string_encode(m)
    }

    pub fn message_law(&self, x: &Sequence) -> Result<Vec<(BitString, f64)>> {
        self.check_input(x, self.model.x_alphabet(), "source sequence")?;
        if self.skip_set.contains(x) {
            return Ok(vec![(BitString::flag(), 1.0)]);
        }
        let matches = self.matching_indices(x);
        Ok(match (matches.as_slice(), self.config.encoder_mode) {
            ([], _) => vec![(BitString::flag(), 1.0)],
            ([first, ..], EncoderMode::SmallestIndex) => vec![(string_encode(*first)?, 1.0)],
            (all, EncoderMode::UniformRandom) => {
                let p = 1.0 / all.len() as f64;
                all.iter()
                    .map(|&m| string_encode(m).map(|b| (b, p)))
                    .collect::<Result<_>>()?
            }
        })
    }

    pub fn decide(&self, y: &Sequence, msg: &BitString) -> Result<Decision> {
        self.check_input(y, self.model.y_alphabet(), "side information")?;
        Ok(self.decide_unchecked(y, msg))
    }

    fn decide_unchecked(&self, y: &Sequence, msg: &BitString) -> Decision {
        let reject = |note| Decision {
            hypothesis: Hypothesis::H1,
            note,
        };
        if msg.is_flag() {
            return reject(None);
        }
        let m = match string_decode(msg) {
            Ok(m) => m,
            Err(_) => return reject(Some(DecisionNote::Malformed)),
        };
        let Some(u) = self.codebook.codeword(m) else {
            return reject(Some(DecisionNote::IndexBeyondCodebook(m)));
        };
        let hypothesis = if self.uy_typical.check_symbols(u, y.symbols()) {
            Hypothesis::H0
        } else {
            Hypothesis::H1
        };
        Decision {
            hypothesis,
            note: None,
        }
    }
}

impl Scheme for SchemeParams {
    fn model(&self) -> &SourceModel {
        &self.model
    }

    fn blocklength(&self) -> usize {
        self.config.n
    }

    fn encode(&self, x: &Sequence, rng: &mut dyn RngCore) -> BitString {
        SchemeParams::encode(self, x, rng).expect("harness passes well-formed sequences")
    }

    fn message_law(&self, x: &Sequence) -> Vec<(BitString, f64)> {
        SchemeParams::message_law(self, x).expect("harness passes well-formed sequences")
    }

    fn decide(&self, y: &Sequence, msg: &BitString) -> Decision {
        self.decide_unchecked(y, msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Pmf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dsbs_scheme(n: usize, mu: f64, eps: f64, mode: EncoderMode) -> SchemeParams {
        let model = SourceModel::dsbs(0.1).unwrap();
        let ch = Channel::bsc(0.25).unwrap();
        SchemeParams::build(&model, &ch, SchemeConfig::new(n, eps, mu, 11).with_mode(mode)).unwrap()
    }

    #[test]
    fn codebook_follows_u_marginal() {
        let s = dsbs_scheme(8, 0.25, 0.2, EncoderMode::SmallestIndex);
        assert_eq!(s.codebook().pu(), &Pmf::new(vec![0.5, 0.5]).unwrap());
        assert!((s.codebook().rate_bits() - (s.i_ux() + 0.25)).abs() < 1e-15);
        // μ >= ε leaves nothing to skip
        assert!(s.skip_set().is_empty());
    }

    #[test]
    fn skip_set_members_send_flag() {
        let s = dsbs_scheme(10, 0.15, 0.3, EncoderMode::SmallestIndex);
        let members = s.skip_set().members().unwrap();
        assert!(!members.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for x in members.iter().take(20) {
            assert!(s.encode(x, &mut rng).unwrap().is_flag());
        }
    }

    #[test]
    fn unmatched_source_sends_flag() {
        let s = dsbs_scheme(8, 0.25, 0.2, EncoderMode::SmallestIndex);
        let x = Sequence::new(2, vec![0; 8]).unwrap();
        assert!(s.matching_indices(&x).is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(s.encode(&x, &mut rng).unwrap().is_flag());
        assert_eq!(s.message_law(&x).unwrap(), vec![(BitString::flag(), 1.0)]);
    }

    #[test]
    fn smallest_index_mode_is_deterministic() {
        let s = dsbs_scheme(8, 0.25, 0.2, EncoderMode::SmallestIndex);
        for i in 0..256 {
            let x = Sequence::from_index(2, 8, i);
            let a = s.encode(&x, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            let b = s.encode(&x, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
            assert_eq!(a, b);
            if let Some(&m) = s.matching_indices(&x).first() {
                assert_eq!(string_decode(&a).unwrap(), m);
            }
        }
    }

    #[test]
    fn uniform_mode_picks_matches_only() {
        let s = dsbs_scheme(8, 0.25, 0.2, EncoderMode::UniformRandom);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..256 {
            let x = Sequence::from_index(2, 8, i);
            let matches = s.matching_indices(&x);
            let msg = s.encode(&x, &mut rng).unwrap();
            if matches.is_empty() {
                assert!(msg.is_flag());
            } else {
                assert!(matches.contains(&string_decode(&msg).unwrap()));
            }
        }
    }

    #[test]
    fn detector_rules() {
        let s = dsbs_scheme(8, 0.25, 0.2, EncoderMode::SmallestIndex);
        let y = Sequence::from_index(2, 8, 77);
        assert_eq!(s.decide(&y, &BitString::flag()).unwrap().hypothesis, Hypothesis::H1);

        let bad = BitString::new(vec![false, true]);
        let d = s.decide(&y, &bad).unwrap();
        assert_eq!(d, Decision { hypothesis: Hypothesis::H1, note: Some(DecisionNote::Malformed) });

        let beyond = string_encode(s.codebook().size() + 1).unwrap();
        let d = s.decide(&y, &beyond).unwrap();
        assert_eq!(d.note, Some(DecisionNote::IndexBeyondCodebook(s.codebook().size() + 1)));

        // a codeword is jointly typical with itself under P_UY only if that
        // joint type is close to P_UY; y = u flips no symbols, so use the
        // reference check directly
        let u1 = s.codebook().entry(1).unwrap();
        let puy = push_to_uy(s.model.pxy(), s.test_channel()).unwrap();
        let want = crate::prob::is_jointly_typical(&u1, &y, &puy, 0.25).unwrap();
        let got = s.decide(&y, &string_encode(1).unwrap()).unwrap().hypothesis;
        assert_eq!(got == Hypothesis::H0, want);
        assert!(s.decide(&Sequence::from_index(2, 7, 0), &bad).is_err());
    }

    #[test]
    fn length_bound_arithmetic() {
        // DSBS(0.1), BSC(0.25), n=100, ε=0.2, μ=0.05
        let i = 1.0 - crate::prob::binary_entropy(0.25).unwrap();
        let b = expected_length_bound(100, 0.2 - 0.05, i, 0.05);
        assert!((b - (0.15 + 0.85 * 100.0 * (i + 0.05))).abs() < 1e-12);
        assert!((b - 20.441_359_420_973_7).abs() < 1e-9, "{b}");

        let s = dsbs_scheme(30, 0.05, 0.2, EncoderMode::SmallestIndex);
        let want = expected_length_bound(30, s.skip_set().target_mass(), s.i_ux(), 0.05);
        assert_eq!(s.expected_length_bound(), want);
        assert!((s.design_rate() - (0.85 * s.i_ux() + 0.05)).abs() < 1e-15);

        let model = SourceModel::dsbs(0.1).unwrap();
        let flat = Channel::constant(2, &Pmf::uniform(2).unwrap()).unwrap();
        let z = SchemeParams::build(&model, &flat, SchemeConfig::new(20, 0.3, 0.1, 0)).unwrap();
        assert!((z.expected_length_bound() - (0.2 + 0.8 * 20.0 * 0.1)).abs() < 1e-12);
    }

    #[test]
    fn default_mu_rule() {
        assert!((default_mu(1000, 0.5) - 0.1).abs() < 1e-15);
        assert_eq!(default_mu(1_000_000_000, 0.5), 0.05);
        assert_eq!(default_mu(8, 0.2), 0.1);
    }
}
