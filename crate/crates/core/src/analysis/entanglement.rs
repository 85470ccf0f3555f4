// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dynamics::Transition;
use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::model::QuadratureDynamics;

/// Smallest symplectic eigenvalue of the partially transposed two-mode
/// covariance: `ν̃₋² = (Δ̃ - √(Δ̃² - 4 det σ)) / 2`, `Δ̃ = det A + det B - 2 det C`.
pub fn partial_transpose_min_eigenvalue(
    state: &GaussianState,
    mode_a: usize,
    mode_b: usize,
) -> Result<f64> {
    if mode_a == mode_b {
        return Err(Error::InvalidParameter(format!(
            "negativity needs two distinct modes, got {mode_a} twice"
        )));
    }
    let pair = state.reduce(&[mode_a, mode_b])?;
    let s = &pair.cov;
    let block = |r: usize, c: usize| -> DMatrix<f64> { s.view((r, c), (2, 2)).into_owned() };
    let (a, b, c) = (block(0, 0), block(2, 2), block(0, 2));
    let tilde = a.determinant() + b.determinant() - 2.0 * c.determinant();
    let disc = (tilde * tilde - 4.0 * s.determinant()).max(0.0);
    Ok(((tilde - disc.sqrt()) / 2.0).max(0.0).sqrt())
}

/// `E_N = max(0, -ln 2ν̃₋)`, natural log, vacuum variance ½.
pub fn logarithmic_negativity(state: &GaussianState, mode_a: usize, mode_b: usize) -> Result<f64> {
    let nu = partial_transpose_min_eigenvalue(state, mode_a, mode_b)?;
    Ok((-(2.0 * nu).ln()).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativitySample {
    pub t: f64,
    pub log_negativity: f64,
}

/// `E_N(t)` on `t_k = k·dt`; stops early at the first non-finite state.
pub fn log_negativity_series(
    dynamics: &QuadratureDynamics,
    initial: &GaussianState,
    dt: f64,
    n_points: usize,
    mode_a: usize,
    mode_b: usize,
) -> Result<Vec<NegativitySample>> {
    let step = Transition::over(dynamics, dt)?;
    let mut state = initial.clone();
    let mut out = Vec::with_capacity(n_points);
    for k in 0..n_points {
        if k > 0 {
            match step.apply(&state) {
                Ok(s) => state = s,
                Err(Error::NonFiniteResult { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        let value = logarithmic_negativity(&state, mode_a, mode_b)?;
        if !value.is_finite() {
            break;
        }
        out.push(NegativitySample {
            t: k as f64 * dt,
            log_negativity: value,
        });
    }
    Ok(out)
}

/// Indices of strict interior local maxima (plateaus count once, at their start).
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < values.len() {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < values.len() && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < values.len() && values[j + 1] < values[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}
