// SPDX-License-Identifier: Apache-2.0

//! State-transfer fidelity: the perturbative closed forms next to the exact
//! Gaussian overlap of the propagated state.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::dynamics::{
    beam_splitter_eigenenergies, double_swap_segments, propagate, propagate_piecewise,
};
use crate::error::{Error, Result};
use crate::gaussian::{coherent_state, thermal_state, vacuum, GaussianState};
use crate::model::{build_quadrature_dynamics, effective_params, SystemSpec, CAVITY_2};

/// Tolerance on `(δ + 4λ) t0 / 2π` being an integer.
const INTERFERENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityBreakdown {
    /// Mechanical-noise factor actually used in `f`: the interference form
    /// when `t0` is an interference time, the eigenphase form otherwise.
    pub f1: f64,
    /// `[1 + (G/δ)²(n_m |e^{-i t0 λ} - e^{-i t0 δ}|² + 2 n_th γ_m t0)]⁻¹` as printed.
    pub f1_printed: f64,
    /// `[1 + (G/δ)²(n_m ((κ - γ_m) t0 / 2)² + 2 n_th γ_m t0)]⁻¹`, only at
    /// interference times.
    pub f1_interference: Option<f64>,
    /// `exp[-(|α| κ t0 / 2)²]`
    pub f2: f64,
    pub f: f64,
    pub f_exact: Option<f64>,
}

/// `q` with `(δ + 4λ) t0 = 2qπ`, if it is an integer.
pub fn interference_order(spec: &SystemSpec, t0: f64) -> Result<Option<u64>> {
    let lambda = effective_params(spec)?.lambda;
    let turns = (spec.delta1 + 4.0 * lambda) * t0 / (2.0 * PI);
    let q = turns.round();
    Ok(
        ((turns - q).abs() < INTERFERENCE_TOL * turns.abs().max(1.0) && q >= 1.0)
            .then_some(q as u64),
    )
}

pub fn transfer_fidelity_closed_form(
    spec: &SystemSpec,
    alpha: Complex<f64>,
    n_m: f64,
    t0: f64,
) -> Result<FidelityBreakdown> {
    if !spec.is_symmetric_beam_splitter() {
        return Err(Error::UnsupportedCase(
            "closed-form fidelity needs red-red drives with G1 = G2 and δ1 = δ2".into(),
        ));
    }
    if t0.is_nan() || t0 <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "transfer time {t0} must be > 0"
        )));
    }
    if n_m.is_nan() || n_m < 0.0 {
        return Err(Error::NegativeOccupation(n_m));
    }
    let (g, delta) = (spec.g1, spec.delta1);
    let lambda = effective_params(spec)?.lambda;
    let kappa = (spec.kappa1 + spec.kappa2) / 2.0;
    let suppression = (g / delta).powi(2);
    let heating = 2.0 * spec.n_th * spec.gamma_m * t0;
    let f1_of = |initial: f64| 1.0 / (1.0 + suppression * (n_m * initial + heating));

    let phase = |w: Complex<f64>| (Complex::new(0.0, -t0) * w).exp();
    let printed = (phase(Complex::new(lambda, 0.0)) - phase(Complex::new(delta, 0.0))).norm_sqr();
    let [_, l2, l3] = beam_splitter_eigenenergies(spec)?;
    let eigenphase = (phase(l2) - phase(l3)).norm_sqr();

    let f1_printed = f1_of(printed);
    let f1_interference =
        interference_order(spec, t0)?.map(|_| f1_of(((kappa - spec.gamma_m) * t0 / 2.0).powi(2)));
    let f1 = f1_interference.unwrap_or_else(|| f1_of(eigenphase));
    let f2 = (-(alpha.norm() * kappa * t0 / 2.0).powi(2)).exp();
    Ok(FidelityBreakdown {
        f1,
        f1_printed,
        f1_interference,
        f2,
        f: f1 * f2,
        f_exact: None,
    })
}

/// Overlap `⟨β|ρ|β⟩` of one mode with the coherent state `|β⟩`:
/// `exp(-½ Δμᵀ (σ + ½I)⁻¹ Δμ) / √det(σ + ½I)`.
pub fn transfer_fidelity_exact(
    state: &GaussianState,
    target: Complex<f64>,
    mode: usize,
) -> Result<f64> {
    let single = state.reduce(&[mode])?;
    let s2 = std::f64::consts::SQRT_2;
    let diff = &single.mean - DVector::from_vec(vec![s2 * target.re, s2 * target.im]);
    let sum = &single.cov + DMatrix::identity(2, 2) * 0.5;
    let det = sum.determinant();
    let inv = sum
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("singular covariance".into()))?;
    let quad = (diff.transpose() * inv * &diff)[(0, 0)];
    Ok(((-0.5 * quad).exp() / det.sqrt()).clamp(0.0, 1.0))
}

/// `|α| e^{i arg⟨o⟩}`: the coherent target carrying the deterministic phase
/// the transfer imprints on the mean field.
pub fn phase_matched_target(
    state: &GaussianState,
    alpha: Complex<f64>,
    mode: usize,
) -> Result<Complex<f64>> {
    let amp = state.amplitude(mode)?;
    if amp.norm() == 0.0 {
        return Ok(alpha);
    }
    Ok(amp / amp.norm() * alpha.norm())
}

/// Cavity 1 in `|α⟩`, mechanics thermal with `n_m`, cavity 2 in vacuum,
/// propagated for `t0`.
pub fn simulate_transfer(
    spec: &SystemSpec,
    alpha: Complex<f64>,
    n_m: f64,
    t0: f64,
    rwa: bool,
) -> Result<GaussianState> {
    let initial = GaussianState::interface(
        coherent_state(alpha.re, alpha.im),
        thermal_state(n_m)?,
        vacuum(1),
    )?;
    propagate(&build_quadrature_dynamics(spec, rwa), &initial, t0)
}

/// Fidelity of the resonant double swap for the same initial state as
/// [`simulate_transfer`]; the target is phase matched.
pub fn double_swap_fidelity(
    spec: &SystemSpec,
    alpha: Complex<f64>,
    n_m: f64,
    rwa: bool,
) -> Result<f64> {
    let initial = GaussianState::interface(
        coherent_state(alpha.re, alpha.im),
        thermal_state(n_m)?,
        vacuum(1),
    )?;
    let final_state = propagate_piecewise(&double_swap_segments(spec, rwa)?, &initial)?;
    let target = phase_matched_target(&final_state, alpha, CAVITY_2)?;
    transfer_fidelity_exact(&final_state, target, CAVITY_2)
}

/// Closed form plus the exact fidelity of cavity 2 against the
/// phase-matched target after rotating-wave propagation.
pub fn transfer_fidelity(
    spec: &SystemSpec,
    alpha: Complex<f64>,
    n_m: f64,
    t0: f64,
) -> Result<FidelityBreakdown> {
    let mut out = transfer_fidelity_closed_form(spec, alpha, n_m, t0)?;
    let final_state = simulate_transfer(spec, alpha, n_m, t0, true)?;
    let target = phase_matched_target(&final_state, alpha, CAVITY_2)?;
    out.f_exact = Some(transfer_fidelity_exact(&final_state, target, CAVITY_2)?);
    Ok(out)
}
