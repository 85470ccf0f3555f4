// SPDX-License-Identifier: Apache-2.0

//! Exact evolution of Gaussian states under linear drift and white noise.
//!
//! Over a time `t` the moments map as `μ ↦ F μ` and `σ ↦ F σ Fᵀ + Q` with
//! `F = e^{A t}` and `Q = ∫₀ᵗ e^{A s} D e^{Aᵀ s} ds`. Both come from the
//! exponential of the block generator `[[A, D], [0, -Aᵀ]]`, evaluated over a
//! short base step and then doubled (`F ← F²`, `Q ← F Q Fᵀ + Q`) so the
//! growing `e^{-Aᵀ t}` block never enters the long-time result.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::{expm, lyapunov, max_real_eigenvalue, norm1};
use crate::model::{build_mode_dynamics, effective_params, QuadratureDynamics, SystemSpec};

/// Real parts at or above `-STABILITY_MARGIN` count as unstable.
pub const STABILITY_MARGIN: f64 = 1e-12;

/// Norm of the block generator over one base step before doubling.
const BASE_STEP_NORM: f64 = 0.5;

/// The affine moment map generated by a [`QuadratureDynamics`] over a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub map: DMatrix<f64>,
    pub noise: DMatrix<f64>,
    pub duration: f64,
}

impl Transition {
    pub fn identity(dim: usize) -> Self {
        Transition {
            map: DMatrix::identity(dim, dim),
            noise: DMatrix::zeros(dim, dim),
            duration: 0.0,
        }
    }

    pub fn over(dynamics: &QuadratureDynamics, t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "time {t} must be finite and >= 0"
            )));
        }
        let n = dynamics.a.nrows();
        if t == 0.0 {
            return Ok(Self::identity(n));
        }

        let mut block = DMatrix::zeros(2 * n, 2 * n);
        block.view_mut((0, 0), (n, n)).copy_from(&dynamics.a);
        block.view_mut((0, n), (n, n)).copy_from(&dynamics.d);
        block
            .view_mut((n, n), (n, n))
            .copy_from(&(-dynamics.a.transpose()));

        let scale = norm1(&block) * t;
        let doublings = if scale > BASE_STEP_NORM {
            (scale / BASE_STEP_NORM).log2().ceil() as i32
        } else {
            0
        };
        let tau = t / 2f64.powi(doublings);
        let e = expm(&(block * tau));
        let mut map = e.view((0, 0), (n, n)).into_owned();
        let mut noise = e.view((0, n), (n, n)) * map.transpose();
        for _ in 0..doublings {
            noise = &map * &noise * map.transpose() + &noise;
            map = &map * &map;
        }
        let out = Transition {
            noise: (&noise + noise.transpose()) * 0.5,
            map,
            duration: t,
        };
        if out
            .map
            .iter()
            .chain(out.noise.iter())
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFiniteResult { t });
        }
        Ok(out)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Transition) -> Transition {
        Transition {
            map: &next.map * &self.map,
            noise: &next.map * &self.noise * next.map.transpose() + &next.noise,
            duration: self.duration + next.duration,
        }
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.mean.len() != self.map.nrows() {
            return Err(Error::InvalidParameter(format!(
                "state of dimension {} for a {}-dimensional generator",
                state.mean.len(),
                self.map.nrows()
            )));
        }
        let mean = &self.map * &state.mean;
        let cov = &self.map * &state.cov * self.map.transpose() + &self.noise;
        let out = GaussianState::from_moments_unchecked(mean, cov, state.mode_labels.clone());
        if !out.is_finite() {
            return Err(Error::NonFiniteResult { t: self.duration });
        }
        Ok(out)
    }
}

pub fn propagate(
    dynamics: &QuadratureDynamics,
    state: &GaussianState,
    t: f64,
) -> Result<GaussianState> {
    Transition::over(dynamics, t)?.apply(state)
}

/// A stretch of time-independent dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub dynamics: QuadratureDynamics,
    pub duration: f64,
}

pub fn propagate_piecewise(segments: &[Segment], state: &GaussianState) -> Result<GaussianState> {
    if segments.is_empty() {
        return Err(Error::InvalidParameter("no segments to propagate".into()));
    }
    segments.iter().try_fold(state.clone(), |s, seg| {
        propagate(&seg.dynamics, &s, seg.duration)
    })
}

/// Resonant swap sequence cavity 1 → mechanics → cavity 2.
///
/// Each leg runs at zero detuning with only one coupling switched on, for a
/// quarter Rabi period `π / (2 G_i)`. Damping, bath and mechanical frequency
/// are taken from `spec`.
pub fn double_swap_segments(spec: &SystemSpec, rwa: bool) -> Result<Vec<Segment>> {
    if spec.g1 <= 0.0 || spec.g2 <= 0.0 {
        return Err(Error::InvalidParameter(
            "double swap needs both couplings positive".into(),
        ));
    }
    let base = spec.with_detuning(0.0);
    let first = base.with_couplings(spec.g1, 0.0);
    let second = base.with_couplings(0.0, spec.g2);
    let half_pi = std::f64::consts::FRAC_PI_2;
    Ok(vec![
        Segment {
            dynamics: crate::model::build_quadrature_dynamics(&first, rwa),
            duration: half_pi / spec.g1,
        },
        Segment {
            dynamics: crate::model::build_quadrature_dynamics(&second, rwa),
            duration: half_pi / spec.g2,
        },
    ])
}

/// Unique stationary state of a stable drift: zero mean and the solution of
/// `A σ + σ Aᵀ + D = 0`.
pub fn steady_state(dynamics: &QuadratureDynamics) -> Result<GaussianState> {
    let max_real_part = max_real_eigenvalue(&dynamics.a);
    if max_real_part >= -STABILITY_MARGIN {
        return Err(Error::Unstable { max_real_part });
    }
    let cov = lyapunov(&dynamics.a, &dynamics.d).ok_or(Error::Unstable { max_real_part })?;
    let n = cov.nrows() / 2;
    let labels = if n == 3 {
        crate::model::MODE_LABELS
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (0..n).map(|k| format!("m{k}")).collect()
    };
    Ok(GaussianState::from_moments_unchecked(
        nalgebra::DVector::zeros(2 * n),
        cov,
        labels,
    ))
}

/// State on a uniform time grid `t_k = k·dt`, `k = 0..n_points`.
///
/// A single one-step [`Transition`] is reused, so the samples carry only
/// accumulated rounding. Sampling stops at the first non-finite state; the
/// returned vector is then shorter than `n_points`.
pub fn sample_trajectory(
    dynamics: &QuadratureDynamics,
    initial: &GaussianState,
    dt: f64,
    n_points: usize,
) -> Result<Vec<GaussianState>> {
    let step = Transition::over(dynamics, dt)?;
    let mut out = Vec::with_capacity(n_points);
    let mut state = initial.clone();
    for k in 0..n_points {
        if k > 0 {
            match step.apply(&state) {
                Ok(s) => state = s,
                Err(Error::NonFiniteResult { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        out.push(state.clone());
    }
    Ok(out)
}

/// `e^{-i M t}` in the mode basis.
pub fn mode_propagator(spec: &SystemSpec, t: f64) -> DMatrix<Complex<f64>> {
    let m = build_mode_dynamics(spec).m;
    expm(&(m * Complex::new(0.0, -t)))
}

/// Perturbative closed form of the beam-splitter propagator.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticPropagatorA {
    pub u: DMatrix<Complex<f64>>,
    /// `(G/δ)(e^{-i t l2} - e^{-i t l3})`: weight of the initial mechanics in
    /// each cavity amplitude.
    pub s_value: Complex<f64>,
    /// Mean of the two dark-mode eigenenergies.
    pub l_mean: Complex<f64>,
}

/// Approximate eigenenergies `(l1, l2, l3)` of the symmetric beam-splitter
/// matrix for `δ ≫ G`.
pub fn beam_splitter_eigenenergies(spec: &SystemSpec) -> Result<[Complex<f64>; 3]> {
    if !spec.is_symmetric_beam_splitter() {
        return Err(Error::UnsupportedCase(
            "closed form needs red-red drives with G1 = G2 and δ1 = δ2".into(),
        ));
    }
    let lambda = effective_params(spec)?.lambda;
    let (g, delta) = (spec.g1, spec.delta1);
    let kappa = (spec.kappa1 + spec.kappa2) / 2.0;
    Ok([
        Complex::new(delta, -kappa / 2.0),
        Complex::new(delta + 2.0 * lambda, -kappa / 2.0),
        Complex::new(
            -2.0 * lambda,
            -(spec.gamma_m + 2.0 * g * g / (delta * delta) * kappa) / 2.0,
        ),
    ])
}

/// Closed-form `U_A(t)`. The cavity block rotates at the mean dark-mode
/// energy `l_mean` and mixes the cavities at rate `λ`.
pub fn analytic_propagator_a(spec: &SystemSpec, t: f64) -> Result<AnalyticPropagatorA> {
    let [l1, l2, l3] = beam_splitter_eigenenergies(spec)?;
    let lambda = effective_params(spec)?.lambda;
    let ratio = spec.g1 / spec.delta1;
    let phase = |l: Complex<f64>| (Complex::new(0.0, -t) * l).exp();
    let l_mean = (l1 + l2) / 2.0;
    let s_value = (phase(l2) - phase(l3)) * ratio;
    let carrier = phase(l_mean);
    let cos = carrier * (lambda * t).cos();
    let isin = carrier * Complex::new(0.0, -(lambda * t).sin());
    let u = DMatrix::from_row_slice(
        3,
        3,
        &[
            cos,
            s_value,
            isin,
            s_value,
            phase(l3),
            s_value,
            isin,
            s_value,
            cos,
        ],
    );
    Ok(AnalyticPropagatorA { u, s_value, l_mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{coherent_state, thermal_state, vacuum};
    use crate::linalg::max_abs_diff;
    use crate::model::{build_quadrature_dynamics, transfer_time, CAVITY_1, CAVITY_2, MECHANICS};
    use std::f64::consts::PI;

    fn fig2_state(n_b: f64) -> GaussianState {
        GaussianState::interface(
            coherent_state(1.0, 0.0),
            thermal_state(n_b).unwrap(),
            vacuum(1),
        )
        .unwrap()
    }

    /// Classical RK4 on the moment equations with a fine step.
    fn rk4_moments(
        q: &QuadratureDynamics,
        s: &GaussianState,
        t: f64,
        steps: usize,
    ) -> GaussianState {
        let h = t / steps as f64;
        let (a, d) = (&q.a, &q.d);
        let fcov = |c: &DMatrix<f64>| a * c + c * a.transpose() + d;
        let mut mu = s.mean.clone();
        let mut cov = s.cov.clone();
        for _ in 0..steps {
            let k1 = a * &mu;
            let k2 = a * (&mu + &k1 * (h / 2.0));
            let k3 = a * (&mu + &k2 * (h / 2.0));
            let k4 = a * (&mu + &k3 * h);
            mu += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            let c1 = fcov(&cov);
            let c2 = fcov(&(&cov + &c1 * (h / 2.0)));
            let c3 = fcov(&(&cov + &c2 * (h / 2.0)));
            let c4 = fcov(&(&cov + &c3 * h));
            cov += (c1 + c2 * 2.0 + c3 * 2.0 + c4) * (h / 6.0);
        }
        GaussianState::from_moments_unchecked(mu, cov, s.mode_labels.clone())
    }

    #[test]
    fn zero_time_is_identity() {
        let q = build_quadrature_dynamics(&SystemSpec::default(), true);
        let s = fig2_state(3.0);
        assert_eq!(propagate(&q, &s, 0.0).unwrap(), s);
        assert!(propagate(&q, &s, -1.0).is_err());
    }

    #[test]
    fn decoupled_cavity_decays_exponentially() {
        let spec = SystemSpec::default().with_couplings(0.0, 0.0);
        let q = build_quadrature_dynamics(&spec, true);
        for t in [1.0, 10.0, 200.0] {
            let s = propagate(&q, &fig2_state(0.0), t).unwrap();
            let want = (-spec.kappa1 * t).exp();
            assert!((s.occupation(CAVITY_1).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_fine_step_integrator() {
        let spec = SystemSpec::default().with_n_th(150.0);
        let q = build_quadrature_dynamics(&spec, true);
        let s0 = fig2_state(3.0);
        let t = 4.0 * PI;
        let exact = propagate(&q, &s0, t).unwrap();
        let rk4 = rk4_moments(&q, &s0, t, 20_000);
        assert!(max_abs_diff(&exact.cov, &rk4.cov) < 1e-9);
        assert!((&exact.mean - &rk4.mean).amax() < 1e-9);
    }

    #[test]
    fn rabi_swap_near_transfer_time() {
        let spec = SystemSpec::default();
        let q = build_quadrature_dynamics(&spec, true);
        let t0 = transfer_time(&spec).unwrap();
        let s = propagate(&q, &fig2_state(3.0), t0).unwrap();
        let n2 = s.occupation(CAVITY_2).unwrap();
        let envelope = (-spec.kappa1 * t0).exp();
        // (G/δ)² = 1/64 bounds the mechanical admixture
        assert!(
            (n2 - envelope).abs() < envelope / 64.0,
            "{n2} vs {envelope}"
        );
        assert!(s.occupation(CAVITY_1).unwrap() < 0.05);
    }

    #[test]
    fn long_horizon_stays_finite() {
        let spec = SystemSpec::red_blue(1f64.cosh(), 1f64.sinh(), 15.0).with_n_th(100.0);
        let q = build_quadrature_dynamics(&spec, true);
        let ss = steady_state(&q).unwrap();
        let rate = -max_real_eigenvalue(&q.a);
        let far = propagate(&q, &vacuum(3), 50.0 / rate).unwrap();
        assert!(max_abs_diff(&far.cov, &ss.cov) < 1e-6 * ss.cov.amax());
    }

    #[test]
    fn unstable_growth_reports_non_finite() {
        let spec = SystemSpec::red_blue(1.0, 1.2, 0.0);
        let q = build_quadrature_dynamics(&spec, true);
        assert!(propagate(&q, &vacuum(3), 10.0).is_ok());
        assert!(matches!(
            propagate(&q, &vacuum(3), 1e5),
            Err(Error::NonFiniteResult { .. })
        ));
    }

    #[test]
    fn piecewise_single_and_split_segments() {
        let q = build_quadrature_dynamics(&SystemSpec::default().with_n_th(10.0), true);
        let s0 = fig2_state(3.0);
        let one = propagate_piecewise(
            &[Segment {
                dynamics: q.clone(),
                duration: 2.5,
            }],
            &s0,
        )
        .unwrap();
        assert_eq!(one, propagate(&q, &s0, 2.5).unwrap());
        let split = propagate_piecewise(
            &[
                Segment {
                    dynamics: q.clone(),
                    duration: 1.0,
                },
                Segment {
                    dynamics: q.clone(),
                    duration: 1.5,
                },
            ],
            &s0,
        )
        .unwrap();
        assert!(max_abs_diff(&split.cov, &one.cov) < 1e-10);
        assert!((&split.mean - &one.mean).amax() < 1e-10);
        assert!(propagate_piecewise(&[], &s0).is_err());
    }

    /// Lossless resonant swaps: a1 → b picks up -i, b → a2 another -i.
    #[test]
    fn lossless_double_swap_moves_coherent_state() {
        let spec = SystemSpec {
            kappa1: 0.0,
            kappa2: 0.0,
            gamma_m: 0.0,
            ..SystemSpec::red_red(1.3, 8.0)
        }
        .with_couplings(1.3, 0.7);
        let alpha = Complex::new(0.6, 0.8);
        let s0 = GaussianState::interface(coherent_state(alpha.re, alpha.im), vacuum(1), vacuum(1))
            .unwrap();
        let segs = double_swap_segments(&spec, true).unwrap();
        let out = propagate_piecewise(&segs, &s0).unwrap();
        assert!((out.occupation(CAVITY_2).unwrap() - alpha.norm_sqr()).abs() < 1e-12);
        assert!((out.amplitude(CAVITY_2).unwrap() + alpha).norm() < 1e-12);
        assert!(out.occupation(MECHANICS).unwrap().abs() < 1e-12);
        assert!(max_abs_diff(&out.cov, &vacuum(3).cov) < 1e-12);
    }

    #[test]
    fn decoupled_steady_state_is_detailed_balance() {
        let spec = SystemSpec::default()
            .with_couplings(0.0, 0.0)
            .with_n_th(7.0);
        let ss = steady_state(&build_quadrature_dynamics(&spec, true)).unwrap();
        let want = [0.5, 0.5, 7.5, 7.5, 0.5, 0.5];
        for (i, w) in want.iter().enumerate() {
            assert!((ss.cov[(i, i)] - w).abs() < 1e-10);
        }
        assert!(ss.mean.amax() == 0.0);
    }

    #[test]
    fn zero_detuning_blue_dominated_is_unstable() {
        for (g1, g2) in [(1.0, 1.1), (1.0, 1.5)] {
            let q = build_quadrature_dynamics(&SystemSpec::red_blue(g1, g2, 0.0), true);
            assert!(matches!(steady_state(&q), Err(Error::Unstable { .. })));
        }
    }

    #[test]
    fn analytic_propagator_at_zero_is_identity() {
        let p = analytic_propagator_a(&SystemSpec::default(), 0.0).unwrap();
        assert!(max_abs_diff(&p.u, &DMatrix::identity(3, 3)) < 1e-15);
        assert_eq!(p.s_value, Complex::new(0.0, 0.0));
    }

    #[test]
    fn analytic_propagator_rejects_asymmetric_setups() {
        let spec = SystemSpec::default().with_couplings(1.0, 0.5);
        assert!(matches!(
            analytic_propagator_a(&spec, 1.0),
            Err(Error::UnsupportedCase(_))
        ));
        let spec = SystemSpec::red_blue(1.0, 1.0, 8.0);
        assert!(analytic_propagator_a(&spec, 1.0).is_err());
    }

    /// At t = 4π the two interfering exponentials in s(t) are back in phase;
    /// only the difference of their decay envelopes survives.
    #[test]
    fn mechanical_weight_vanishes_at_interference_time() {
        let spec = SystemSpec::default();
        let t = 4.0 * PI;
        let p = analytic_propagator_a(&spec, t).unwrap();
        let [_, l2, l3] = beam_splitter_eigenenergies(&spec).unwrap();
        let envelope = (spec.g1 / spec.delta1) * ((l3.im * t).exp() - (l2.im * t).exp()).abs();
        assert!(
            p.s_value.norm() <= envelope + 1e-12,
            "{} > {envelope}",
            p.s_value.norm()
        );
        let off = analytic_propagator_a(&spec, t + PI / 8.5).unwrap();
        assert!(off.s_value.norm() > 10.0 * p.s_value.norm());
    }

    #[test]
    fn mode_propagator_is_identity_at_zero() {
        let u = mode_propagator(&SystemSpec::default(), 0.0);
        assert!(max_abs_diff(&u, &DMatrix::identity(3, 3)) < 1e-15);
    }
}
