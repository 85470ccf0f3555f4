// SPDX-License-Identifier: Apache-2.0

use nalgebra::{Complex, DMatrix, DVector};
use optomech::analysis::{logarithmic_negativity, transfer_fidelity_exact};
use optomech::dynamics::{mode_propagator, propagate, Transition};
use optomech::gaussian::PHYSICALITY_TOL;
use optomech::linalg::max_abs_diff;
use optomech::model::{
    build_mode_dynamics, build_quadrature_dynamics, CAVITY_1, CAVITY_2, MECHANICS,
};
use optomech::{GaussianState, SystemSpec};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = SystemSpec> {
    (
        any::<bool>(),
        0.3..1.5f64,
        0.3..1.5f64,
        0.0..16.0f64,
        0.0..0.2f64,
        0.0..0.2f64,
        0.0..0.01f64,
        0.0..300.0f64,
    )
        .prop_map(|(red_red, g1, g2, delta, k1, k2, gamma, n_th)| {
            let base = if red_red {
                SystemSpec::red_red(1.0, delta.max(1.0))
            } else {
                SystemSpec::red_blue(1.0, 1.0, delta)
            };
            base.with_couplings(g1, g2)
                .with_cavity_damping(k1, k2)
                .with_mechanical_damping(gamma)
                .with_n_th(n_th)
        })
}

fn mode_strategy() -> impl Strategy<Value = GaussianState> {
    (0.0..5.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_map(|(n, re, im)| GaussianState::displaced_thermal(n, Complex::new(re, im)).unwrap())
}

fn state_strategy() -> impl Strategy<Value = GaussianState> {
    (mode_strategy(), mode_strategy(), mode_strategy())
        .prop_map(|(a, b, c)| GaussianState::interface(a, b, c).unwrap())
}

fn scale(m: &DMatrix<f64>) -> f64 {
    m.amax().max(1.0)
}

/// Local phase rotation of each mode, plus a displacement.
fn local_gauge(state: &GaussianState, phases: &[f64], shift: &[f64]) -> GaussianState {
    let n = state.n_modes();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for (k, &th) in phases.iter().enumerate().take(n) {
        let (c, sn) = (th.cos(), th.sin());
        s[(2 * k, 2 * k)] = c;
        s[(2 * k, 2 * k + 1)] = -sn;
        s[(2 * k + 1, 2 * k)] = sn;
        s[(2 * k + 1, 2 * k + 1)] = c;
    }
    let mean = &s * &state.mean + DVector::from_fn(2 * n, |i, _| shift[i % shift.len()]);
    let cov = &s * &state.cov * s.transpose();
    GaussianState::new(mean, cov, state.mode_labels.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup(spec in spec_strategy(), rwa in any::<bool>(), t1 in 0.0..8.0f64, t2 in 0.0..8.0f64) {
        let q = build_quadrature_dynamics(&spec, rwa);
        let whole = Transition::over(&q, t1 + t2).unwrap();
        let parts = Transition::over(&q, t1).unwrap().then(&Transition::over(&q, t2).unwrap());
        prop_assert!(max_abs_diff(&whole.map, &parts.map) <= 1e-10 * scale(&whole.map));
        prop_assert!(max_abs_diff(&whole.noise, &parts.noise) <= 1e-10 * scale(&whole.noise));
    }

    #[test]
    fn propagation_stays_physical(spec in spec_strategy(), rwa in any::<bool>(), init in state_strategy(), t in 0.0..30.0f64) {
        let s = propagate(&build_quadrature_dynamics(&spec, rwa), &init, t).unwrap();
        prop_assert!(s.min_symplectic_eigenvalue() >= 0.5 - PHYSICALITY_TOL);
        for m in [CAVITY_1, MECHANICS, CAVITY_2] {
            prop_assert!(s.occupation(m).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn means_follow_mode_propagator(spec in spec_strategy(), init in state_strategy(), t in 0.0..20.0f64) {
        let q = build_quadrature_dynamics(&spec, true);
        let out = propagate(&q, &init, t).unwrap();
        let conj_last = build_mode_dynamics(&spec).basis[2].ends_with('†');
        let modes = |s: &GaussianState| {
            DVector::from_fn(3, |k, _| {
                let a = s.amplitude(k).unwrap();
                if k == 2 && conj_last { a.conj() } else { a }
            })
        };
        let want = mode_propagator(&spec, t) * modes(&init);
        prop_assert!((modes(&out) - want).camax() <= 1e-10 * (1.0 + modes(&init).camax()));
    }

    #[test]
    fn negativity_is_local_gauge_invariant(
        spec in spec_strategy(),
        t in 0.0..20.0f64,
        phases in prop::collection::vec(-3.2..3.2f64, 3),
        shift in prop::collection::vec(-5.0..5.0f64, 6),
    ) {
        let s = propagate(&build_quadrature_dynamics(&spec, true), &GaussianState::vacuum(3), t).unwrap();
        let moved = local_gauge(&s, &phases, &shift);
        for (a, b) in [(CAVITY_1, CAVITY_2), (CAVITY_1, MECHANICS)] {
            let e0 = logarithmic_negativity(&s, a, b).unwrap();
            let e1 = logarithmic_negativity(&moved, a, b).unwrap();
            prop_assert!((e0 - e1).abs() < 1e-9, "{} vs {}", e0, e1);
            prop_assert!(e0 >= 0.0);
        }
    }

    #[test]
    fn fidelity_is_bounded(init in state_strategy(), re in -3.0..3.0f64, im in -3.0..3.0f64, mode in 0usize..3) {
        let f = transfer_fidelity_exact(&init, Complex::new(re, im), mode).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn coherent_overlap_with_itself_is_one(re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let s = GaussianState::coherent(re, im);
        let f = transfer_fidelity_exact(&s, Complex::new(re, im), 0).unwrap();
        prop_assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_inverts_tensor(a in mode_strategy(), b in mode_strategy(), c in mode_strategy()) {
        let joint = GaussianState::tensor(&[a.clone(), b.clone(), c.clone()]).unwrap();
        for (k, part) in [a, b, c].iter().enumerate() {
            let r = joint.reduce(&[k]).unwrap();
            prop_assert!(max_abs_diff(&r.cov, &part.cov) == 0.0);
            prop_assert!((r.mean.clone() - part.mean.clone()).amax() == 0.0);
        }
        let swapped = joint.reduce(&[2, 0]).unwrap();
        prop_assert_eq!(swapped.cov[(0, 0)], joint.cov[(4, 4)]);
        prop_assert_eq!(swapped.cov[(2, 3)], joint.cov[(0, 1)]);
    }
}
