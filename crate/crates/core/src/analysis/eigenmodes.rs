// SPDX-License-Identifier: Apache-2.0

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use crate::dynamics::beam_splitter_eigenenergies;
use crate::error::{Error, Result};
use crate::model::{effective_params, DriveCase, ModeDynamics, SystemSpec, MECHANICS};

/// Relative eigenvalue separation below which the spectrum counts as
/// degenerate. Defective pairs split numerically by about `√ε ‖M‖`, so the
/// bound sits above that.
pub const DEGENERACY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeLabel {
    DarkDoublet1,
    DarkDoublet2,
    Bright,
}

/// Eigenpairs of a mode matrix ordered `[DarkDoublet1, DarkDoublet2, Bright]`.
///
/// Vectors are unit-norm with the largest component made real and positive
/// (the last one on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenmodeSet {
    pub values: [Complex<f64>; 3],
    pub vectors: [DVector<Complex<f64>>; 3],
    pub labels: [ModeLabel; 3],
}

impl EigenmodeSet {
    pub fn get(&self, label: ModeLabel) -> (Complex<f64>, &DVector<Complex<f64>>) {
        let k = self
            .labels
            .iter()
            .position(|l| *l == label)
            .expect("all labels present");
        (self.values[k], &self.vectors[k])
    }

    /// Largest `|M v - l v|` over the three pairs.
    pub fn max_residual(&self, m: &DMatrix<Complex<f64>>) -> f64 {
        (0..3)
            .map(|k| (m * &self.vectors[k] - &self.vectors[k] * self.values[k]).camax())
            .fold(0.0, f64::max)
    }

    fn from_pairs(mut pairs: Vec<(Complex<f64>, DVector<Complex<f64>>)>) -> Self {
        for (_, v) in pairs.iter_mut() {
            *v = fix_phase(v);
        }
        let mech = |v: &DVector<Complex<f64>>| v[MECHANICS].norm();
        // bright = largest mechanical weight, then dark doublets by weight
        pairs.sort_by(|a, b| mech(&a.1).total_cmp(&mech(&b.1)));
        let mut it = pairs.into_iter();
        let (l1, v1) = it.next().unwrap();
        let (l2, v2) = it.next().unwrap();
        let (l3, v3) = it.next().unwrap();
        EigenmodeSet {
            values: [l1, l2, l3],
            vectors: [v1, v2, v3],
            labels: [
                ModeLabel::DarkDoublet1,
                ModeLabel::DarkDoublet2,
                ModeLabel::Bright,
            ],
        }
    }
}

fn fix_phase(v: &DVector<Complex<f64>>) -> DVector<Complex<f64>> {
    let n = v.norm();
    let v = v.map(|z| z / n);
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .rposition(|z| z.norm() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    let rot = v[pivot].conj() / v[pivot].norm();
    v.map(|z| z * rot)
}

/// `r × s` without conjugation: orthogonal to both rows under the bilinear
/// product, so a null vector of a rank-2 matrix.
fn cross(m: &DMatrix<Complex<f64>>, i: usize, j: usize) -> DVector<Complex<f64>> {
    let (r, s) = (m.row(i), m.row(j));
    DVector::from_vec(vec![
        r[1] * s[2] - r[2] * s[1],
        r[2] * s[0] - r[0] * s[2],
        r[0] * s[1] - r[1] * s[0],
    ])
}

fn null_vector(m: &DMatrix<Complex<f64>>, l: Complex<f64>) -> DVector<Complex<f64>> {
    let shifted = m - DMatrix::<Complex<f64>>::identity(3, 3) * l;
    let mut v = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(&shifted, i, j))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    if v.norm() == 0.0 {
        v = DVector::from_element(3, Complex::new(1.0, 0.0));
    }
    v /= Complex::new(v.norm(), 0.0);
    // inverse iteration polishes the cross-product estimate
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let nudged =
        &shifted - DMatrix::<Complex<f64>>::identity(3, 3) * Complex::new(1e-13 * scale, 0.0);
    let lu = nudged.lu();
    for _ in 0..2 {
        match lu.solve(&v) {
            Some(w) if w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && w.norm() > 0.0 => {
                v = &w / Complex::new(w.norm(), 0.0);
            }
            _ => break,
        }
    }
    v
}

/// General eigendecomposition of the 3×3 mode matrix.
pub fn eigenmodes_numeric(dynamics: &ModeDynamics) -> Result<EigenmodeSet> {
    let m = &dynamics.m;
    let values = m
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::InvalidParameter("Schur decomposition failed".into()))?;
    let values = [values[0], values[1], values[2]];
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..3 {
        for j in i + 1..3 {
            if (values[i] - values[j]).norm() < DEGENERACY_TOL * scale {
                return Err(Error::DegenerateSpectrum { values });
            }
        }
    }
    let pairs = values.iter().map(|&l| (l, null_vector(m, l))).collect();
    Ok(EigenmodeSet::from_pairs(pairs))
}

fn vec3(a: f64, b: f64, c: f64) -> DVector<Complex<f64>> {
    DVector::from_vec(vec![
        Complex::new(a, 0.0),
        Complex::new(b, 0.0),
        Complex::new(c, 0.0),
    ])
}

/// Leading-order eigenmodes for `δ ≫ G`.
///
/// Red-red needs `δ1 = δ2`, `G1 = G2`; red-blue needs `δ1 = δ2`, `κ1 = κ2`.
/// Vectors are normalized; their components are the ones that solve
/// `M v = l v` to first order in `G/δ`.
pub fn eigenmodes_analytic(spec: &SystemSpec) -> Result<EigenmodeSet> {
    if spec.delta1 != spec.delta2 {
        return Err(Error::UnsupportedCase(
            "closed-form eigenmodes need δ1 = δ2".into(),
        ));
    }
    let delta = spec.delta1;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let pairs = match spec.drive_case {
        DriveCase::RedRed => {
            if spec.g1 != spec.g2 {
                return Err(Error::UnsupportedCase(
                    "closed-form beam-splitter eigenmodes need G1 = G2".into(),
                ));
            }
            let [l1, l2, l3] = beam_splitter_eigenenergies(spec)?;
            let r = spec.g1 / delta;
            vec![
                (l1, vec3(-s2, 0.0, s2)),
                (l2, vec3(s2, 2f64.sqrt() * r, s2)),
                (l3, vec3(-r, 1.0, -r)),
            ]
        }
        DriveCase::RedBlue => {
            if spec.kappa1 != spec.kappa2 {
                return Err(Error::UnsupportedCase(
                    "closed-form squeezing eigenmodes need κ1 = κ2".into(),
                ));
            }
            let p = effective_params(spec)?;
            let (g0, dl, kappa) = (p.g0, p.delta_lambda, spec.kappa1);
            vec![
                (
                    Complex::new(delta, -kappa / 2.0),
                    vec3(-spec.g2 / g0, 0.0, spec.g1 / g0),
                ),
                (
                    Complex::new(delta + dl, -kappa / 2.0),
                    vec3(spec.g1 / g0, dl / g0, -spec.g2 / g0),
                ),
                (
                    Complex::new(-dl, -(spec.gamma_m + dl / delta * kappa) / 2.0),
                    vec3(-spec.g1 / delta, 1.0, spec.g2 / delta),
                ),
            ]
        }
    };
    let mut it = pairs.into_iter().map(|(l, v)| (l, fix_phase(&v)));
    let (l1, v1) = it.next().unwrap();
    let (l2, v2) = it.next().unwrap();
    let (l3, v3) = it.next().unwrap();
    Ok(EigenmodeSet {
        values: [l1, l2, l3],
        vectors: [v1, v2, v3],
        labels: [
            ModeLabel::DarkDoublet1,
            ModeLabel::DarkDoublet2,
            ModeLabel::Bright,
        ],
    })
}
