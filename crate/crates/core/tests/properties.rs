use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use vldht::exponent::{solve_exponent, ExponentQuery, SolverOptions, SourceModel};
use vldht::prob::{
    compose, empirical_type, entropy, is_jointly_typical, is_typical, joint_type, kl_divergence,
    mutual_information, push_to_uy, Channel, JointPmf, Pmf, Sequence,
};
use vldht::scheme::{index_length, read_message, string_decode, string_encode, write_message, BitString};

fn pmf(k: usize) -> impl Strategy<Value = Pmf> {
    prop::collection::vec(0.0f64..1.0, k).prop_filter_map("all-zero weights", |w| Pmf::normalized(w).ok())
}

fn channel(inputs: usize, outputs: usize) -> impl Strategy<Value = Channel> {
    prop::collection::vec(pmf(outputs), inputs).prop_map(|rows| Channel::from_pmfs(rows).unwrap())
}

fn joint(rows: usize, cols: usize) -> impl Strategy<Value = JointPmf> {
    prop::collection::vec(0.0f64..1.0, rows * cols).prop_filter_map("all-zero weights", move |w| {
        let total: f64 = w.iter().sum();
        (total > 0.0).then(|| JointPmf::new(rows, cols, w.iter().map(|v| v / total).collect()).ok())?
    })
}

fn sequence(alphabet: usize, n: usize) -> impl Strategy<Value = Sequence> {
    prop::collection::vec(0..alphabet as u8, n).prop_map(move |s| Sequence::new(alphabet, s).unwrap())
}

proptest! {
    #[test]
    fn entropy_lies_between_zero_and_log_alphabet(p in (1usize..6).prop_flat_map(pmf)) {
        let h = entropy(&p);
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (p.alphabet_size() as f64).log2() + 1e-12);
    }

    #[test]
    fn divergence_is_nonnegative(pq in (1usize..6).prop_flat_map(|k| (pmf(k), pmf(k)))) {
        let (p, q) = pq;
        prop_assert!(kl_divergence(&p, &q).unwrap() >= -1e-12);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn data_processing(pxy in joint(3, 3), ch in channel(3, 4)) {
        // U - X - Y carries no more about Y than X does
        let puy = push_to_uy(&pxy, &ch).unwrap();
        prop_assert!(mutual_information(&puy) <= mutual_information(&pxy) + 1e-12);
        let pux = compose(&pxy.row_marginal(), &ch).unwrap();
        prop_assert!(mutual_information(&puy) <= mutual_information(&pux) + 1e-12);
    }

    #[test]
    fn every_sequence_is_typical_at_mu_two(s in sequence(3, 12), p in pmf(3)) {
        prop_assert!(is_typical(&s, &p, 2.0).unwrap());
        let t = empirical_type(&s).unwrap();
        prop_assert!(is_typical(&s, &t, 0.0).unwrap());
    }

    #[test]
    fn joint_type_marginals(ab in (1usize..20).prop_flat_map(|n| (sequence(3, n), sequence(2, n))), j in joint(3, 2)) {
        let (a, b) = ab;
        let t = joint_type(&a, &b).unwrap();
        prop_assert_eq!(t.row_marginal(), empirical_type(&a).unwrap());
        prop_assert_eq!(t.col_marginal(), empirical_type(&b).unwrap());
        prop_assert!(is_jointly_typical(&a, &b, &j, 2.0).unwrap());
    }

    #[test]
    fn codec_round_trip(m in 1u64..=u64::MAX) {
        let s = string_encode(m).unwrap();
        prop_assert_eq!(s.len(), index_length(m) as usize);
        prop_assert!(!s.is_flag());
        prop_assert_eq!(string_decode(&s).unwrap(), m);
    }

    #[test]
    fn framed_messages_round_trip(bits in prop::collection::vec(prop::collection::vec(any::<bool>(), 0..70), 0..5)) {
        let msgs: Vec<BitString> = bits.into_iter().map(BitString::new).collect();
        let mut buf = Vec::new();
        for m in &msgs {
            write_message(&mut buf, m).unwrap();
        }
        let mut r = buf.as_slice();
        let mut back = Vec::new();
        while let Some(m) = read_message(&mut r).unwrap() {
            back.push(m);
        }
        prop_assert_eq!(back, msgs);
    }
}

fn binary_model() -> impl Strategy<Value = SourceModel> {
    joint(2, 2)
        .prop_filter("degenerate marginal", |j| !j.row_marginal().is_degenerate() && !j.col_marginal().is_degenerate())
        .prop_map(SourceModel::new)
}

fn opts() -> SolverOptions {
    SolverOptions {
        u_alphabet: Some(2),
        ..SolverOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solver_output_is_feasible(model in binary_model(), eps in 0.0f64..0.9, rate in 0.0f64..1.0) {
        let q = ExponentQuery::new(eps, rate).unwrap();
        let r = solve_exponent(&model, &q, &opts()).unwrap();
        prop_assert!(r.feasible_margin() >= -1e-9, "{r:?}");
        prop_assert!(r.theta >= -1e-12 && r.theta <= model.mutual_information() + 1e-9);
    }

    #[test]
    fn exponent_nondecreasing_in_rate(model in binary_model(), eps in 0.0f64..0.6, r1 in 0.0f64..0.8, dr in 0.0f64..0.3) {
        let lo = solve_exponent(&model, &ExponentQuery::new(eps, r1).unwrap(), &opts()).unwrap();
        let hi = solve_exponent(&model, &ExponentQuery::new(eps, r1 + dr).unwrap(), &opts()).unwrap();
        prop_assert!(hi.theta >= lo.theta - 2e-6, "{} < {}", hi.theta, lo.theta);
    }

    #[test]
    fn epsilon_scales_the_rate(model in binary_model(), eps in 0.0f64..0.8, r in 0.02f64..0.9) {
        let a = solve_exponent(&model, &ExponentQuery::new(eps, (1.0 - eps) * r).unwrap(), &opts()).unwrap();
        let b = solve_exponent(&model, &ExponentQuery::new(0.0, r).unwrap(), &opts()).unwrap();
        assert_abs_diff_eq!(a.theta, b.theta, epsilon = 1e-5);
    }
}
