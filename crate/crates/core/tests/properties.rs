use proptest::prelude::*;
use ptsym_core::oracle::{moment_ode_solve, MomentVector};
use ptsym_core::*;

fn p(g: f64, l: f64) -> SystemParams {
    SystemParams::new(g, l).unwrap()
}

fn gain() -> impl Strategy<Value = f64> {
    prop_oneof![0.0..3.0, Just(1.0), (-1e-7..1e-7).prop_map(|d: f64| 1.0 + d)]
}

fn input() -> impl Strategy<Value = InputState> {
    prop::sample::select(InputState::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn determinant_is_one(g in gain(), l in 0.0..5.0) {
        prop_assert!((determinant(p(g, l)) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn semigroup(g in gain(), l1 in 0.0..2.5, l2 in 0.0..2.5) {
        prop_assert!(semigroup_defect(g, l1, l2).unwrap() <= 1e-10);
    }

    #[test]
    fn commutators_are_preserved(g in gain(), l in 0.0..5.0) {
        let c = commutator_diagnostics(p(g, l));
        prop_assert!((c.c_aa - 1.0).abs() <= 1e-10, "{c:?}");
        prop_assert!(c.c_ab.norm() <= 1e-10, "{c:?}");
    }

    #[test]
    fn unbroken_entries_are_bounded(g in 0.0..0.999, l in 0.0..50.0) {
        let omega = classify_regime(p(g, l)).rate;
        let k = propagator(p(g, l));
        for e in k.matrix().iter().flatten() {
            prop_assert!(e.norm() <= 1.0 + g / omega + 1e-12);
        }
    }

    #[test]
    fn cross_moment_obeys_cauchy_schwarz(g in gain(), l in 0.0..5.0) {
        let s = spontaneous_signals(p(g, l), NoiseMethod::ClosedForm).unwrap();
        prop_assert!(s.s_ab.norm_sqr() <= s.s_a * s.s_b * (1.0 + 1e-12));
    }

    #[test]
    fn spontaneous_signals_grow_with_length(g in 0.01..3.0, l in 0.0..5.0, dl in 0.0..1.0) {
        let a = spontaneous_signals(p(g, l), NoiseMethod::ClosedForm).unwrap();
        let b = spontaneous_signals(p(g, l + dl), NoiseMethod::ClosedForm).unwrap();
        prop_assert!(b.s_a >= a.s_a * (1.0 - 1e-14));
        prop_assert!(b.s_b >= a.s_b * (1.0 - 1e-14));
    }

    #[test]
    fn vacuum_correlation_is_between_one_and_two(g in 0.01..3.0, l in 0.01..6.0) {
        let h = hbt_vacuum(p(g, l)).unwrap();
        prop_assert!(h.g2 >= 1.0 && h.g2 <= 2.0 + 1e-12, "{h:?}");
        prop_assert!(h.q >= 0.0 && h.q <= 1.0 + 1e-12);
    }

    #[test]
    fn totals_include_the_stimulated_part(s in input(), g in gain(), l in 0.0..5.0) {
        let i = intensities(s, p(g, l));
        prop_assert!(i.i_a >= i.i_a_st && i.i_b >= i.i_b_st);
        prop_assert!(i.i_a_st >= 0.0 && i.i_b_st >= 0.0);
    }

    #[test]
    fn stimulated_intensities_are_classical(g in gain(), l in 0.0..5.0) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        for (s, a0, b0) in [(InputState::PhotonA, one, zero), (InputState::PhotonB, zero, one)] {
            let i = intensities(s, p(g, l));
            let (a, b) = classical_amplitudes(p(g, l), a0, b0);
            prop_assert!(close_mixed(i.i_a_st, a.norm_sqr(), 1e-14));
            prop_assert!(close_mixed(i.i_b_st, b.norm_sqr(), 1e-14));
        }
    }

    #[test]
    fn stimulated_only_noon_is_first_term(g in gain(), l in 0.01..5.0) {
        let k = propagator(p(g, l));
        let o = observe(InputState::Noon2, p(g, l), Spontaneous::Exclude);
        let i = intensities(InputState::Noon2, p(g, l));
        let first = (k.k_aa * k.k_ba + k.k_ab * k.k_bb).norm_sqr() / (i.i_a_st * i.i_b_st);
        prop_assert!(close_mixed(o.g2.value().unwrap(), first, 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn moment_ode_keeps_populations_nonnegative(s in input(), g in gain(), l in 0.0..4.0) {
        let v = moment_ode_solve(MomentVector::from_input(s), p(g, l), 400).unwrap();
        prop_assert!(v.n_a >= -1e-12 && v.n_b >= -1e-12, "{v:?}");
    }
}
