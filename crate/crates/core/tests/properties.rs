//! Cross-module invariants as property tests.

use proptest::prelude::*;
use wqpe::emulator::{gap_threshold, run_algorithm, EmulationParams};
use wqpe::instances::{gapped_hamiltonian, random_observable, rng};
use wqpe::linalg::CMat;
use wqpe::qpe::{overlap, phase_distribution};
use wqpe::resources::{estimate_case, total_toffoli, CostModel, ErrorBudget, EstimateOptions, Observable, QftCost, SystemCase};
use wqpe::walk::{build_reflection, nearest_register_phase, qubitise, HermitianSystem};
use wqpe::windows::{make_window, WindowChoice, WindowSpec};

fn arb_spec() -> impl Strategy<Value = WindowSpec> {
    prop_oneof![Just(WindowSpec::rectangular()), (0.0f64..60.0).prop_map(WindowSpec::kaiser)]
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn windows_are_unit_and_even(spec in arb_spec(), n in 1u32..12) {
        let w = make_window(spec, n).unwrap();
        let a = w.amplitudes();
        prop_assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() <= 1e-12);
        for x in 0..a.len() {
            prop_assert!((a[x] - a[a.len() - 1 - x]).abs() <= 1e-12);
        }
    }

    #[test]
    fn distribution_shifts_with_the_phase(spec in arb_spec(), n in 1u32..8, phi in 0.0f64..1.0, j in 0usize..64) {
        let w = make_window(spec, n).unwrap();
        let len = w.len();
        let j = j % len;
        let base = phase_distribution(&w, phi).unwrap();
        let shifted = phase_distribution(&w, phi + j as f64 / len as f64).unwrap();
        for k in 0..len {
            prop_assert!((shifted.mass[k] - base.mass[(k + len - j) % len]).abs() <= 1e-12);
            prop_assert!((base.mass[k] - overlap(&w, phi - k as f64 / len as f64).powi(2)).abs() <= 1e-12);
        }
    }

    #[test]
    fn reflections_are_unitary_involutions(spec in arb_spec(), n in 2u32..5, seed in any::<u64>(), dim in 1usize..4) {
        let mut r = rng(seed);
        let h = gapped_hamiltonian(&mut r, dim, 0.05).unwrap();
        let q = qubitise(&h).unwrap();
        let w = make_window(spec, n).unwrap();
        let phi = nearest_register_phase(q.eigenpairs[0].phase, n);
        let refl = build_reflection(&w, &q, phi).unwrap();
        let id = CMat::identity(refl.nrows(), refl.ncols());
        prop_assert!(max_abs(&(&refl * &refl - &id)) <= 1e-9);
        prop_assert!(max_abs(&(refl.adjoint() * &refl - &id)) <= 1e-9);
        prop_assert!(max_abs(&(q.unitary.adjoint() * &q.unitary - CMat::identity(2 * dim, 2 * dim))) <= 1e-9);
    }

    #[test]
    fn emulation_is_reproducible_and_in_range(seed in any::<u64>(), kaiser in any::<bool>(), m in 0u32..3) {
        let l = 3;
        let mut r = rng(seed);
        let h = gapped_hamiltonian(&mut r, 3, (1.1 * gap_threshold(l, m)).min(0.33)).unwrap();
        let f = random_observable(&mut r, 3).unwrap();
        let spec = if kaiser { WindowSpec::kaiser(wqpe::windows::optimal_beta(m)) } else { WindowSpec::rectangular() };
        let w = make_window(spec, l + m).unwrap();
        let params = EmulationParams::new(m, 16);
        let a = run_algorithm(&w, &h, &f, &params).unwrap();
        let b = run_algorithm(&w, &h, &f, &params).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.estimate >= -1.0 - a.bound && a.estimate <= 1.0 + a.bound);
    }

    #[test]
    fn budget_split_is_conservative(target in 1e-8f64..10.0, a in 0.01f64..10.0, b in 0.01f64..10.0, c in 0.01f64..10.0) {
        let s = ErrorBudget::split(target, [a, b, c]).unwrap();
        prop_assert_eq!(s.epsilon_inner + s.epsilon_outer + s.epsilon_data, target);
    }

    #[test]
    fn toffoli_is_monotone(n in 0u32..30, n_o in 0u32..30, asp in 0u64..1000, win in 0u64..1000, qh in 0u64..1000, bf in 0u64..1000, rot in 0u64..100) {
        let c = CostModel { t_asp: asp, t_window: win, t_qh: qh, t_bf: bf, qft: QftCost::PerRotation(rot) };
        let t = total_toffoli(n, n_o, &c).unwrap();
        prop_assert!(total_toffoli(n + 1, n_o, &c).unwrap() >= t);
        prop_assert!(total_toffoli(n, n_o + 1, &c).unwrap() >= t);
        let bumped = [
            CostModel { t_qh: qh + 1, ..c },
            CostModel { t_bf: bf + 1, ..c },
            CostModel { qft: QftCost::PerRotation(rot + 1), ..c },
        ];
        for b in &bumped {
            prop_assert!(total_toffoli(n, n_o, b).unwrap() >= t);
        }
    }

    #[test]
    fn emitted_cases_keep_the_gap_promise(lambda_h in 1.0f64..500.0, gap_frac in 1e-5f64..0.1, lambda_f in 1.0f64..200.0, eps in 1e-4f64..1e-1, kaiser in any::<bool>()) {
        let case = SystemCase {
            name: "synthetic".into(), observable: Observable::Kinetic, lambda_h, gap: gap_frac * lambda_h, lambda_f,
            thc_rank_h: 100, thc_rank_f: 10, bits_keep_h: 10, bits_keep_f: 10, bits_rot_h: 16, bits_rot_f: 16, n_orbitals: 10,
        };
        let w = if kaiser { WindowChoice::KaiserAuto } else { WindowChoice::Rectangular };
        if let Ok(r) = estimate_case(&case, &ErrorBudget::thirds(eps).unwrap(), w, &CostModel::default(), &EstimateOptions::default(), None) {
            prop_assert!(case.phase_gap() > gap_threshold(r.l, r.m));
            prop_assert_eq!(r.n, r.l + r.m);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn budget_split_sums_exactly(target in 1e-12f64..1e3, a in 1e-3f64..1e3, b in 1e-3f64..1e3, c in 1e-3f64..1e3) {
        let s = ErrorBudget::split(target, [a, b, c]).unwrap();
        prop_assert_eq!(s.epsilon_inner + s.epsilon_outer + s.epsilon_data, target);
        prop_assert!(s.epsilon_data > 0.0);
    }
}

#[test]
fn identity_observable_recovers_one_for_both_windows() {
    let h = HermitianSystem::diagonal(&[(2.0 * std::f64::consts::PI * 0.3).cos(), 0.95]).unwrap();
    let f = HermitianSystem::scaled_identity(2, 1.0).unwrap();
    for spec in [WindowSpec::rectangular(), WindowSpec::kaiser(wqpe::windows::optimal_beta(1))] {
        let r = run_algorithm(&make_window(spec, 5).unwrap(), &h, &f, &EmulationParams::new(1, 20)).unwrap();
        assert!((r.truth - 1.0).abs() < 1e-12);
        assert!(r.realized_error <= r.bound);
    }
}
