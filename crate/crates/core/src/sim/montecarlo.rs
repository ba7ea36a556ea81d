use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{ErrorReport, ReportMode};
use super::stats::{wilson_half_width, Z95};
use crate::exponent::SourceModel;
use crate::prob::{Pmf, Sequence};
use crate::scheme::{cumulative, sample_symbol, Hypothesis, Scheme};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypotheses {
    H0,
    H1,
    #[default]
    Both,
}

impl Hypotheses {
    fn includes(self, h: Hypothesis) -> bool {
        match self {
            Hypotheses::Both => true,
            Hypotheses::H0 => h == Hypothesis::H0,
            Hypotheses::H1 => h == Hypothesis::H1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialPlan {
    #[serde(default)]
    pub hypotheses: Hypotheses,
    /// Trials per simulated hypothesis.
    pub num_trials: u64,
    pub master_seed: u64,
}

impl TrialPlan {
    pub fn new(num_trials: u64, master_seed: u64) -> Self {
        TrialPlan {
            hypotheses: Hypotheses::Both,
            num_trials,
            master_seed,
        }
    }
}

/// The generator for one trial: stream `2 t + h` of a ChaCha8 keyed by the
/// master seed, so every trial's randomness is fixed by `(seed, h, t)` alone.
pub fn trial_rng(master_seed: u64, hypothesis: Hypothesis, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    let h = match hypothesis {
        Hypothesis::H0 => 0,
        Hypothesis::H1 => 1,
    };
    rng.set_stream(trial.wrapping_mul(2).wrapping_add(h));
    rng
}

/// Pair sampler: joint draws under H0, independent marginal draws under H1.
struct PairSampler {
    n: usize,
    nx: usize,
    ny: usize,
    joint_cdf: Vec<f64>,
    x_cdf: Vec<f64>,
    y_cdf: Vec<f64>,
}

impl PairSampler {
    fn new(model: &SourceModel, n: usize) -> Self {
        let flat = Pmf::normalized(model.pxy().probs().to_vec()).expect("joint pmf is valid");
        PairSampler {
            n,
            nx: model.x_alphabet(),
            ny: model.y_alphabet(),
            joint_cdf: cumulative(&flat),
            x_cdf: cumulative(model.px()),
            y_cdf: cumulative(model.py()),
        }
    }

    fn draw(&self, h: Hypothesis, rng: &mut dyn RngCore) -> (Sequence, Sequence) {
        let mut xs = Vec::with_capacity(self.n);
        let mut ys = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            match h {
                Hypothesis::H0 => {
                    let cell = sample_symbol(&self.joint_cdf, rng) as usize;
                    xs.push((cell / self.ny) as u8);
                    ys.push((cell % self.ny) as u8);
                }
                Hypothesis::H1 => {
                    xs.push(sample_symbol(&self.x_cdf, rng));
                    ys.push(sample_symbol(&self.y_cdf, rng));
                }
            }
        }
        (
            Sequence::new(self.nx, xs).expect("sampled symbols"),
            Sequence::new(self.ny, ys).expect("sampled symbols"),
        )
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    trials: u64,
    h0_decisions: u64,
    len_sum: u64,
    len_sq_sum: u128,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            h0_decisions: self.h0_decisions + o.h0_decisions,
            len_sum: self.len_sum + o.len_sum,
            len_sq_sum: self.len_sq_sum + o.len_sq_sum,
        }
    }
}

fn run_hypothesis<S: Scheme + ?Sized>(scheme: &S, sampler: &PairSampler, h: Hypothesis, plan: &TrialPlan) -> Tally {
    (0..plan.num_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(plan.master_seed, h, t);
            let (x, y) = sampler.draw(h, &mut rng);
            let msg = scheme.encode(&x, &mut rng);
            let decision = scheme.decide(&y, &msg);
            let len = msg.len() as u64;
            Tally {
                trials: 1,
                h0_decisions: (decision.hypothesis == Hypothesis::H0) as u64,
                len_sum: len,
                len_sq_sum: (len * len) as u128,
            }
        })
        .reduce(Tally::default, Tally::merge)
}

/// Monte-Carlo estimate of `α_n`, `β_n` and `E[len(M)]`. Tallies are integer
/// sums, so the report does not depend on how trials are scheduled.
pub fn simulate<S: Scheme + ?Sized>(scheme: &S, plan: &TrialPlan) -> ErrorReport {
    let sampler = PairSampler::new(scheme.model(), scheme.blocklength());
    let mut lengths = Tally::default();
    let mut alpha = (None, None);
    let mut beta = (None, None);
    for h in [Hypothesis::H0, Hypothesis::H1] {
        if !plan.hypotheses.includes(h) || plan.num_trials == 0 {
            continue;
        }
        let t = run_hypothesis(scheme, &sampler, h, plan);
        lengths = lengths.merge(t);
        let (hits, value) = match h {
            Hypothesis::H0 => (t.trials - t.h0_decisions, &mut alpha),
            Hypothesis::H1 => (t.h0_decisions, &mut beta),
        };
        *value = (
            Some(hits as f64 / t.trials as f64),
            Some(wilson_half_width(hits, t.trials)),
        );
    }
    let n = lengths.trials.max(1) as f64;
    let mean = lengths.len_sum as f64 / n;
    let var = if lengths.trials > 1 {
        ((lengths.len_sq_sum as f64 - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    ErrorReport {
        mode: ReportMode::MonteCarlo,
        n: scheme.blocklength(),
        num_trials: plan.num_trials,
        alpha_hat: alpha.0,
        alpha_ci: alpha.1,
        beta_hat: beta.0,
        beta_ci: beta.1,
        mean_len_bits: mean,
        mean_len_ci: Z95 * (var / n).sqrt(),
        len_variance: var,
    }
}
