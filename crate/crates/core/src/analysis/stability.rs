// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::linalg::max_real_eigenvalue;
use crate::model::{build_quadrature_dynamics, DriveCase, QuadratureDynamics, SystemSpec};

/// Routh–Hurwitz predicate for red-blue drives with `δ1 = δ2 = δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouthHurwitz {
    /// `G1²κ1 - G2²κ2 + δ²γ_m`
    pub first_condition: f64,
    /// `(G1²κ1 - G2²κ2)(G1²κ2 - G2²κ1) + δ²κ1κ2`
    pub second_condition: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    /// `None` outside the regime the predicate covers.
    pub routh_hurwitz: Option<RouthHurwitz>,
    /// Authoritative verdict from the drift spectrum.
    pub numeric_stable: bool,
    pub max_real_part: f64,
}

impl StabilityReport {
    pub fn agrees(&self) -> Option<bool> {
        self.routh_hurwitz
            .map(|rh| rh.stable == self.numeric_stable)
    }
}

/// Closed-form stability conditions. They are exact at `δ = 0` with equal
/// cavity damping and track the spectrum well for `κ1 = κ2`; with unequal
/// cavity damping they are only indicative.
pub fn routh_hurwitz(spec: &SystemSpec) -> Option<RouthHurwitz> {
    if spec.drive_case != DriveCase::RedBlue || spec.delta1 != spec.delta2 {
        return None;
    }
    let (g1s, g2s) = (spec.g1 * spec.g1, spec.g2 * spec.g2);
    let (k1, k2) = (spec.kappa1, spec.kappa2);
    let d2 = spec.delta1 * spec.delta1;
    let first_condition = g1s * k1 - g2s * k2 + d2 * spec.gamma_m;
    let second_condition = (g1s * k1 - g2s * k2) * (g1s * k2 - g2s * k1) + d2 * k1 * k2;
    Some(RouthHurwitz {
        first_condition,
        second_condition,
        stable: first_condition > 0.0 && second_condition > 0.0,
    })
}

pub fn stability_of(dynamics: &QuadratureDynamics) -> (bool, f64) {
    let max_real_part = max_real_eigenvalue(&dynamics.a);
    (max_real_part < 0.0, max_real_part)
}

/// Both verdicts for the rotating-wave generator of `spec`.
pub fn stability(spec: &SystemSpec) -> StabilityReport {
    let (numeric_stable, max_real_part) = stability_of(&build_quadrature_dynamics(spec, true));
    StabilityReport {
        routh_hurwitz: routh_hurwitz(spec),
        numeric_stable,
        max_real_part,
    }
}
