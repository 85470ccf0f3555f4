// SPDX-License-Identifier: Apache-2.0

use nalgebra::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    phase_matched_target, simulate_transfer, transfer_fidelity_closed_form,
    transfer_fidelity_exact, FidelityBreakdown,
};
use crate::error::{Error, Result};
use crate::model::{transfer_time, DriveCase, SystemSpec, CAVITY_2};

pub const DEFAULT_Q_MAX: u64 = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetuningOptimum {
    pub delta: f64,
    pub q: u64,
    pub t0: f64,
    /// Closed-form breakdown at the optimum, with the exact fidelity filled in.
    pub fidelity: FidelityBreakdown,
}

/// `(q, δ = 2G√q)` for `q = 1..=q_max`; at these detunings the transfer
/// time `π/(2λ)` is an interference time.
pub fn admissible_detunings(g: f64, q_max: u64) -> Vec<(u64, f64)> {
    (1..=q_max)
        .map(|q| (q, 2.0 * g * (q as f64).sqrt()))
        .collect()
}

/// What the detuning scan maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Perturbative `F = F1 F2`.
    ClosedForm,
    /// Overlap of the propagated cavity-2 state with the phase-matched target.
    Exact,
}

/// Maximizes the closed-form `F = F1 F2` over the admissible detunings with
/// `t0 = π/(2λ)`; ties go to the smaller `δ`.
pub fn optimize_detuning(
    spec_base: &SystemSpec,
    n_th: f64,
    alpha: Complex<f64>,
    n_m: f64,
    q_max: u64,
) -> Result<DetuningOptimum> {
    optimize_detuning_by(spec_base, n_th, alpha, n_m, q_max, Objective::ClosedForm)
}

fn exact(spec: &SystemSpec, alpha: Complex<f64>, n_m: f64, t0: f64) -> Result<f64> {
    let final_state = simulate_transfer(spec, alpha, n_m, t0, true)?;
    let target = phase_matched_target(&final_state, alpha, CAVITY_2)?;
    transfer_fidelity_exact(&final_state, target, CAVITY_2)
}

/// [`optimize_detuning`] with a choice of objective. The closed form is
/// only trustworthy for `G/δ ≪ 1`; at the smallest `q` it can prefer
/// detunings where the exact transfer is poor.
pub fn optimize_detuning_by(
    spec_base: &SystemSpec,
    n_th: f64,
    alpha: Complex<f64>,
    n_m: f64,
    q_max: u64,
    objective: Objective,
) -> Result<DetuningOptimum> {
    if spec_base.drive_case != DriveCase::RedRed
        || spec_base.g1 != spec_base.g2
        || spec_base.g1.is_nan()
        || spec_base.g1 <= 0.0
    {
        return Err(Error::UnsupportedCase(
            "detuning optimization needs red-red drives with G1 = G2 > 0".into(),
        ));
    }
    if q_max == 0 {
        return Err(Error::InvalidParameter("q_max must be at least 1".into()));
    }
    let base = spec_base.with_n_th(n_th);
    let candidates: Vec<(f64, DetuningOptimum)> = admissible_detunings(base.g1, q_max)
        .into_par_iter()
        .map(|(q, delta)| {
            let spec = base.with_detuning(delta);
            let t0 = transfer_time(&spec)?;
            let mut fidelity = transfer_fidelity_closed_form(&spec, alpha, n_m, t0)?;
            let score = match objective {
                Objective::ClosedForm => fidelity.f,
                Objective::Exact => {
                    let f = exact(&spec, alpha, n_m, t0)?;
                    fidelity.f_exact = Some(f);
                    f
                }
            };
            Ok((
                score,
                DetuningOptimum {
                    delta,
                    q,
                    t0,
                    fidelity,
                },
            ))
        })
        .collect::<Result<_>>()?;
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if c.0 > best.0 {
            best = *c;
        }
    }
    let mut best = best.1;
    if best.fidelity.f_exact.is_none() {
        let spec = base.with_detuning(best.delta);
        best.fidelity.f_exact = Some(exact(&spec, alpha, n_m, best.t0)?);
    }
    Ok(best)
}
