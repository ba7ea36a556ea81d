use rand::RngCore;
use vldht::exponent::SourceModel;
use vldht::prob::{Channel, Pmf, Sequence};
use vldht::scheme::{string_encode, BitString, Decision, Hypothesis, Scheme, SchemeConfig, SchemeParams};
use vldht::sim::{
    empirical_exponent, exact_enumerate, exact_enumerate_guarded, simulate, ErrorReport, Hypotheses,
    TrialPlan,
};
use vldht::Error;

struct AlwaysH0 {
    model: SourceModel,
    n: usize,
}

impl Scheme for AlwaysH0 {
    fn model(&self) -> &SourceModel {
        &self.model
    }
    fn blocklength(&self) -> usize {
        self.n
    }
    fn encode(&self, _: &Sequence, _: &mut dyn RngCore) -> BitString {
        string_encode(2).unwrap()
    }
    fn message_law(&self, _: &Sequence) -> Vec<(BitString, f64)> {
        vec![(string_encode(2).unwrap(), 1.0)]
    }
    fn decide(&self, _: &Sequence, _: &BitString) -> Decision {
        Decision {
            hypothesis: Hypothesis::H0,
            note: None,
        }
    }
}

/// Always sends the flag; the detector is the honest one.
struct AlwaysFlag(SchemeParams);

impl Scheme for AlwaysFlag {
    fn model(&self) -> &SourceModel {
        self.0.model()
    }
    fn blocklength(&self) -> usize {
        self.0.n()
    }
    fn encode(&self, _: &Sequence, _: &mut dyn RngCore) -> BitString {
        BitString::flag()
    }
    fn message_law(&self, _: &Sequence) -> Vec<(BitString, f64)> {
        vec![(BitString::flag(), 1.0)]
    }
    fn decide(&self, y: &Sequence, msg: &BitString) -> Decision {
        Scheme::decide(&self.0, y, msg)
    }
}

fn dsbs() -> SourceModel {
    SourceModel::dsbs(0.1).unwrap()
}

fn honest(n: usize, mu: f64, eps: f64, seed: u64) -> SchemeParams {
    SchemeParams::build(&dsbs(), &Channel::bsc(0.25).unwrap(), SchemeConfig::new(n, eps, mu, seed)).unwrap()
}

fn alpha(r: &ErrorReport) -> f64 {
    r.alpha_hat.unwrap()
}

fn beta(r: &ErrorReport) -> f64 {
    r.beta_hat.unwrap()
}

#[test]
fn stub_detector_always_accepting() {
    let s = AlwaysH0 { model: dsbs(), n: 5 };
    let r = simulate(&s, &TrialPlan::new(500, 1));
    assert_eq!(alpha(&r), 0.0);
    assert_eq!(beta(&r), 1.0);
    assert_eq!(r.mean_len_bits, 1.0);
    let e = exact_enumerate(&s).unwrap();
    assert_eq!((alpha(&e), beta(&e)), (0.0, 1.0));
    assert!((e.mean_len_bits - 1.0).abs() < 1e-12);
}

#[test]
fn stub_encoder_always_flagging() {
    let s = AlwaysFlag(honest(6, 0.3, 0.2, 0));
    let r = simulate(&s, &TrialPlan::new(500, 2));
    assert_eq!(alpha(&r), 1.0);
    assert_eq!(beta(&r), 0.0);
    let e = exact_enumerate(&s).unwrap();
    assert_eq!((alpha(&e), beta(&e)), (1.0, 0.0));
}

#[test]
fn single_letter_toy_by_hand() {
    // U = X, one codeword, μ = 1.1: a pair is typical iff its cell has mass >= 0.45
    let mut cfg = SchemeConfig::new(1, 0.0, 1.1, 4);
    cfg.codebook_rate = Some(0.0);
    let s = SchemeParams::build(&dsbs(), &Channel::identity(2).unwrap(), cfg).unwrap();
    assert_eq!(s.codebook().size(), 1);
    let e = exact_enumerate(&s).unwrap();
    // accept iff x = y = u(1); the index message is empty, the flag one bit
    assert!((alpha(&e) - 0.55).abs() < 1e-12, "{e:?}");
    assert!((beta(&e) - 0.25).abs() < 1e-12);
    assert!((e.mean_len_bits - 0.5).abs() < 1e-12);
    assert_eq!(e.alpha_ci, Some(0.0));
    assert_eq!(e.mean_len_ci, 0.0);
}

#[test]
fn independent_model_gives_complementary_errors() {
    let model = SourceModel::new(vldht::prob::JointPmf::product(
        &Pmf::bernoulli(0.3).unwrap(),
        &Pmf::bernoulli(0.6).unwrap(),
    ));
    let s = SchemeParams::build(&model, &Channel::bsc(0.2).unwrap(), SchemeConfig::new(7, 0.3, 0.35, 9)).unwrap();
    let e = exact_enumerate(&s).unwrap();
    assert!((alpha(&e) + beta(&e) - 1.0).abs() < 1e-12, "{e:?}");
}

#[test]
fn monte_carlo_tracks_exact() {
    let s = honest(8, 0.25, 0.2, 5);
    let e = exact_enumerate(&s).unwrap();
    let trials = 40_000;
    let r = simulate(&s, &TrialPlan::new(trials, 77));
    let se = |p: f64| (p * (1.0 - p) / trials as f64).sqrt();
    assert!((alpha(&r) - alpha(&e)).abs() <= 4.0 * se(alpha(&e)));
    assert!((beta(&r) - beta(&e)).abs() <= 4.0 * se(beta(&e)));
    let len_se = (e.len_variance / (2 * trials) as f64).sqrt();
    assert!((r.mean_len_bits - e.mean_len_bits).abs() <= 4.0 * len_se);
    assert!(r.alpha_ci.unwrap() > 0.0 && r.mean_len_ci > 0.0);
}

#[test]
fn exact_length_matches_message_law() {
    let s = honest(6, 0.3, 0.2, 1);
    let e = exact_enumerate(&s).unwrap();
    let px = s.model().px().clone();
    let direct: f64 = (0..64)
        .map(|i| {
            let x = Sequence::from_index(2, 6, i);
            let law = Scheme::message_law(&s, &x);
            x.log2_prob(&px).exp2() * law.iter().map(|(m, w)| w * m.len() as f64).sum::<f64>()
        })
        .sum();
    assert!((e.mean_len_bits - direct).abs() < 1e-12);
}

#[test]
fn same_plan_same_report() {
    let s = honest(8, 0.3, 0.2, 2);
    let plan = TrialPlan::new(3000, 123);
    assert_eq!(simulate(&s, &plan), simulate(&s, &plan));
    let other = simulate(&s, &TrialPlan::new(3000, 124));
    assert_ne!(simulate(&s, &plan), other);
}

#[test]
fn report_is_independent_of_thread_count() {
    let s = honest(8, 0.3, 0.2, 2);
    let plan = TrialPlan::new(2000, 9);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| (simulate(&s, &plan), exact_enumerate(&s).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn single_hypothesis_plans() {
    let s = honest(6, 0.3, 0.2, 2);
    let mut plan = TrialPlan::new(1000, 1);
    plan.hypotheses = Hypotheses::H1;
    let r = simulate(&s, &plan);
    assert!(r.alpha_hat.is_none() && r.beta_hat.is_some());
    plan.hypotheses = Hypotheses::H0;
    let r = simulate(&s, &plan);
    assert!(r.alpha_hat.is_some() && r.beta_hat.is_none());
}

#[test]
fn larger_skip_set_only_rejects_more() {
    let model = dsbs();
    let ch = Channel::bsc(0.25).unwrap();
    let mut last: Option<ErrorReport> = None;
    for mass in [0.0, 0.05, 0.1, 0.2, 0.3] {
        let mut cfg = SchemeConfig::new(10, 0.4, 0.3, 6);
        cfg.skip_mass = Some(mass);
        let s = SchemeParams::build(&model, &ch, cfg).unwrap();
        let e = exact_enumerate(&s).unwrap();
        if let Some(prev) = &last {
            assert!(alpha(&e) >= alpha(prev) - 1e-12);
            assert!(beta(&e) <= beta(prev) + 1e-12);
        }
        last = Some(e);
    }
}

#[test]
fn exact_guard_refuses_with_estimate() {
    let s = honest(8, 0.3, 0.2, 0);
    match exact_enumerate_guarded(&s, 1000.0) {
        Err(Error::GuardExceeded { estimate, .. }) => assert_eq!(estimate, 65536.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn constant_test_channel_has_no_exponent() {
    let ch = Channel::constant(2, &Pmf::uniform(2).unwrap()).unwrap();
    let e = empirical_exponent(&dsbs(), &ch, 0.2, 0.9, &[8, 10, 12], 3).unwrap();
    assert!(e.theory_theta.abs() < 1e-12);
    assert!(e.slope_bits.abs() < 0.05, "{e:?}");
}

#[test]
fn single_blocklength_fit_is_a_point_rate() {
    let e = empirical_exponent(&dsbs(), &Channel::bsc(0.25).unwrap(), 0.2, 0.4, &[8], 3).unwrap();
    assert_eq!(e.n_values, vec![8]);
    assert!((e.slope_bits + e.beta_values[0].log2() / 8.0).abs() < 1e-15);
}
