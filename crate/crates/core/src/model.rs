// SPDX-License-Identifier: Apache-2.0

//! Physical parameters and the linear generators they induce.
//!
//! All rates are measured in units of a reference coupling `G` and times in
//! units of `1/G`. Modes are ordered `(a1, b, a2)`: the two cavities with the
//! mechanical oscillator in between. Quadratures are interleaved as
//! `(x1, p1, x_b, p_b, x2, p2)` with `x = (o + o†)/√2`, `p = (o - o†)/(i√2)`,
//! so the vacuum has variance ½.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::symplectic_form;

/// Index of each mode in the `(a1, b, a2)` ordering.
pub const CAVITY_1: usize = 0;
pub const MECHANICS: usize = 1;
pub const CAVITY_2: usize = 2;

pub const MODE_LABELS: [&str; 3] = ["a1", "b", "a2"];

/// Which sideband each cavity drive sits near.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriveCase {
    /// Both cavities driven below resonance: `-Δ_i = ω_m + δ_i`.
    /// Yields a beam-splitter exchange between the cavities.
    RedRed,
    /// Cavity 1 red (`-Δ_1 = ω_m + δ_1`), cavity 2 blue (`Δ_2 = ω_m + δ_2`).
    /// Yields two-mode squeezing between the cavities.
    RedBlue,
}

impl DriveCase {
    pub fn name(self) -> &'static str {
        match self {
            DriveCase::RedRed => "red-red",
            DriveCase::RedBlue => "red-blue",
        }
    }
}

impl std::str::FromStr for DriveCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "red-red" | "redred" | "rr" | "beam-splitter" => Ok(DriveCase::RedRed),
            "red-blue" | "redblue" | "rb" | "two-mode-squeezing" => Ok(DriveCase::RedBlue),
            other => Err(Error::InvalidParameter(format!(
                "unknown drive case `{other}`"
            ))),
        }
    }
}

/// Physical parameters of the two-cavity, one-mechanical-mode interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub omega_m: f64,
    pub g1: f64,
    pub g2: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub gamma_m: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Thermal phonon number of the mechanical bath.
    pub n_th: f64,
    pub drive_case: DriveCase,
}

impl Default for SystemSpec {
    /// Beam-splitter configuration with the rates used throughout the
    /// state-transfer study: `ω_m = 50`, `κ = 0.025`, `γ_m = 5e-4`, `δ = 8`.
    fn default() -> Self {
        SystemSpec {
            omega_m: 50.0,
            g1: 1.0,
            g2: 1.0,
            kappa1: 0.025,
            kappa2: 0.025,
            gamma_m: 5e-4,
            delta1: 8.0,
            delta2: 8.0,
            n_th: 0.0,
            drive_case: DriveCase::RedRed,
        }
    }
}

impl SystemSpec {
    /// Symmetric beam-splitter setup with `G1 = G2 = g`, `δ1 = δ2 = delta`.
    pub fn red_red(g: f64, delta: f64) -> Self {
        SystemSpec {
            g1: g,
            g2: g,
            delta1: delta,
            delta2: delta,
            ..Default::default()
        }
    }

    /// Two-mode-squeezing setup with equal detunings and the entanglement
    /// study's mechanical damping `γ_m = 2e-3`.
    pub fn red_blue(g1: f64, g2: f64, delta: f64) -> Self {
        SystemSpec {
            g1,
            g2,
            delta1: delta,
            delta2: delta,
            gamma_m: 2e-3,
            drive_case: DriveCase::RedBlue,
            ..Default::default()
        }
    }

    pub fn with_n_th(mut self, n_th: f64) -> Self {
        self.n_th = n_th;
        self
    }

    pub fn with_detuning(mut self, delta: f64) -> Self {
        self.delta1 = delta;
        self.delta2 = delta;
        self
    }

    pub fn with_couplings(mut self, g1: f64, g2: f64) -> Self {
        self.g1 = g1;
        self.g2 = g2;
        self
    }

    pub fn with_cavity_damping(mut self, kappa1: f64, kappa2: f64) -> Self {
        self.kappa1 = kappa1;
        self.kappa2 = kappa2;
        self
    }

    pub fn with_mechanical_damping(mut self, gamma_m: f64) -> Self {
        self.gamma_m = gamma_m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_m", self.omega_m),
            ("g1", self.g1),
            ("g2", self.g2),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma_m", self.gamma_m),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("n_th", self.n_th),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} is not finite"
                )));
            }
        }
        for (name, v) in &fields[1..6] {
            if *v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be >= 0"
                )));
            }
        }
        if self.n_th < 0.0 {
            return Err(Error::NegativeOccupation(self.n_th));
        }
        if self.omega_m <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "omega_m = {} must be > 0",
                self.omega_m
            )));
        }
        Ok(())
    }

    pub(crate) fn is_symmetric_beam_splitter(&self) -> bool {
        self.drive_case == DriveCase::RedRed && self.g1 == self.g2 && self.delta1 == self.delta2
    }

    /// Damping rates in mode order `(κ1, γ_m, κ2)`.
    pub fn damping_rates(&self) -> [f64; 3] {
        [self.kappa1, self.gamma_m, self.kappa2]
    }
}

/// Mode-basis Langevin generator: `i dv/dt = M v + i √K v_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDynamics {
    pub m: DMatrix<Complex<f64>>,
    /// `K = diag[κ1, γ_m, κ2]`.
    pub k: DMatrix<f64>,
    /// `[a1, b, a2]` for red-red, `[a1, b, a2†]` for red-blue.
    pub basis: [&'static str; 3],
}

/// Real drift and diffusion on the six interleaved quadratures:
/// `dμ/dt = A μ`, `dσ/dt = A σ + σ Aᵀ + D`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureDynamics {
    pub a: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub rwa: bool,
}

/// Parameters of the effective two-cavity interaction once the mechanics is
/// adiabatically eliminated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveParams {
    pub lambda: f64,
    /// AC-Stark shifts `G_i² / δ_i`.
    pub lambda1: f64,
    pub lambda2: f64,
    /// `δ1 + λ1 - δ2 - λ2` (red-red) or `δ1 + λ1 - δ2 + λ2` (red-blue).
    pub resonance_residual: f64,
    pub delta_lambda: f64,
    pub g0: f64,
}

pub fn build_mode_dynamics(spec: &SystemSpec) -> ModeDynamics {
    let c = |re: f64, im: f64| Complex::new(re, im);
    let mut m = DMatrix::from_element(3, 3, c(0.0, 0.0));
    m[(0, 0)] = c(spec.delta1, -spec.kappa1 / 2.0);
    m[(1, 1)] = c(0.0, -spec.gamma_m / 2.0);
    m[(2, 2)] = c(spec.delta2, -spec.kappa2 / 2.0);
    m[(0, 1)] = c(spec.g1, 0.0);
    m[(1, 0)] = c(spec.g1, 0.0);
    m[(1, 2)] = c(spec.g2, 0.0);
    let basis = match spec.drive_case {
        DriveCase::RedRed => {
            m[(2, 1)] = c(spec.g2, 0.0);
            ["a1", "b", "a2"]
        }
        DriveCase::RedBlue => {
            m[(2, 1)] = c(-spec.g2, 0.0);
            ["a1", "b", "a2†"]
        }
    };
    let k = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&spec.damping_rates()));
    ModeDynamics { m, k, basis }
}

/// Quadratic Hamiltonian `H = ½ rᵀ h r` on interleaved quadratures.
struct QuadraticHamiltonian {
    h: DMatrix<f64>,
}

impl QuadraticHamiltonian {
    fn new(n_modes: usize) -> Self {
        QuadraticHamiltonian {
            h: DMatrix::zeros(2 * n_modes, 2 * n_modes),
        }
    }

    /// `w o_j† o_j`
    fn number(&mut self, j: usize, w: f64) {
        self.h[(2 * j, 2 * j)] += w;
        self.h[(2 * j + 1, 2 * j + 1)] += w;
    }

    fn add_sym(&mut self, r: usize, c: usize, w: f64) {
        self.h[(r, c)] += w;
        self.h[(c, r)] += w;
    }

    /// `g (o_j† o_k + o_j o_k†) = g (x_j x_k + p_j p_k)`
    fn exchange(&mut self, j: usize, k: usize, g: f64) {
        self.add_sym(2 * j, 2 * k, g);
        self.add_sym(2 * j + 1, 2 * k + 1, g);
    }

    /// `g (o_j o_k + o_j† o_k†) = g (x_j x_k - p_j p_k)`
    fn squeeze(&mut self, j: usize, k: usize, g: f64) {
        self.add_sym(2 * j, 2 * k, g);
        self.add_sym(2 * j + 1, 2 * k + 1, -g);
    }

    fn drift(&self) -> DMatrix<f64> {
        symplectic_form(self.h.nrows() / 2) * &self.h
    }
}

/// Builds the quadrature drift and diffusion.
///
/// With `rwa = true` the generator is the rotating-wave Hamiltonian in the
/// frame co-rotating with the mechanics. With `rwa = false` it is the full
/// linearized Hamiltonian `ω_m b†b - Σ Δ_i a_i†a_i + Σ G_i (a_i† + a_i)(b† + b)`
/// in the drive frame, which keeps the counter-rotating terms. Occupations
/// coincide between the two frames at equal times.
pub fn build_quadrature_dynamics(spec: &SystemSpec, rwa: bool) -> QuadratureDynamics {
    let mut h = QuadraticHamiltonian::new(3);
    let cavity2_sign = match spec.drive_case {
        DriveCase::RedRed => 1.0,
        DriveCase::RedBlue => -1.0,
    };
    if rwa {
        h.number(CAVITY_1, spec.delta1);
        h.number(CAVITY_2, cavity2_sign * spec.delta2);
        h.exchange(CAVITY_1, MECHANICS, spec.g1);
        match spec.drive_case {
            DriveCase::RedRed => h.exchange(CAVITY_2, MECHANICS, spec.g2),
            DriveCase::RedBlue => h.squeeze(CAVITY_2, MECHANICS, spec.g2),
        }
    } else {
        h.number(MECHANICS, spec.omega_m);
        h.number(CAVITY_1, spec.omega_m + spec.delta1);
        h.number(CAVITY_2, cavity2_sign * (spec.omega_m + spec.delta2));
        for (cavity, g) in [(CAVITY_1, spec.g1), (CAVITY_2, spec.g2)] {
            h.exchange(cavity, MECHANICS, g);
            h.squeeze(cavity, MECHANICS, g);
        }
    }

    let mut a = h.drift();
    let rates = spec.damping_rates();
    let mut d = DMatrix::zeros(6, 6);
    for (mode, &rate) in rates.iter().enumerate() {
        // cavity inputs are vacuum, the mechanical bath carries n_th
        let n_in = if mode == MECHANICS { spec.n_th } else { 0.0 };
        for q in [2 * mode, 2 * mode + 1] {
            a[(q, q)] -= rate / 2.0;
            d[(q, q)] = rate * (2.0 * n_in + 1.0) / 2.0;
        }
    }
    QuadratureDynamics { a, d, rwa }
}

pub fn effective_params(spec: &SystemSpec) -> Result<EffectiveParams> {
    if spec.delta1 == 0.0 {
        return Err(Error::ZeroDetuning { cavity: 1 });
    }
    if spec.delta2 == 0.0 {
        return Err(Error::ZeroDetuning { cavity: 2 });
    }
    let lambda = spec.g1 * spec.g2 * (1.0 / spec.delta1 + 1.0 / spec.delta2) / 2.0;
    let lambda1 = spec.g1 * spec.g1 / spec.delta1;
    let lambda2 = spec.g2 * spec.g2 / spec.delta2;
    let resonance_residual = match spec.drive_case {
        DriveCase::RedRed => spec.delta1 + lambda1 - spec.delta2 - lambda2,
        DriveCase::RedBlue => spec.delta1 + lambda1 - spec.delta2 + lambda2,
    };
    Ok(EffectiveParams {
        lambda,
        lambda1,
        lambda2,
        resonance_residual,
        delta_lambda: lambda1 - lambda2,
        g0: spec.g1.hypot(spec.g2),
    })
}

/// `π / (2λ)`: duration of a complete cavity-to-cavity swap.
pub fn transfer_time(spec: &SystemSpec) -> Result<f64> {
    Ok(std::f64::consts::PI / (2.0 * effective_params(spec)?.lambda))
}
