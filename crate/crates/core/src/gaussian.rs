// SPDX-License-Identifier: Apache-2.0

//! Gaussian states of bosonic modes in the interleaved `(x, p)` ordering,
//! vacuum variance ½.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{symmetrize, symplectic_form};
use crate::model::MODE_LABELS;

/// Tolerance on the smallest symplectic eigenvalue below ½.
pub const PHYSICALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub mode_labels: Vec<String>,
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("m{k}")).collect()
}

impl GaussianState {
    /// Builds a state from raw moments; the covariance is symmetrized.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>, mode_labels: Vec<String>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) || cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::InvalidParameter(format!(
                "moments of dimension {dim} and {}x{} do not describe a set of modes",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mode_labels.len() != dim / 2 {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} modes",
                mode_labels.len(),
                dim / 2
            )));
        }
        Ok(GaussianState {
            mean,
            cov: symmetrize(&cov),
            mode_labels,
        })
    }

    pub(crate) fn from_moments_unchecked(
        mean: DVector<f64>,
        cov: DMatrix<f64>,
        labels: Vec<String>,
    ) -> Self {
        GaussianState {
            mean,
            cov: symmetrize(&cov),
            mode_labels: labels,
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        assert!(n_modes >= 1, "a state needs at least one mode");
        GaussianState {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
            mode_labels: default_labels(n_modes),
        }
    }

    pub fn thermal(n: f64) -> Result<Self> {
        Self::displaced_thermal(n, Complex::new(0.0, 0.0))
    }

    pub fn coherent(alpha_re: f64, alpha_im: f64) -> Self {
        Self::displaced_thermal(0.0, Complex::new(alpha_re, alpha_im)).expect("zero occupation")
    }

    /// Thermal state with `n` quanta displaced by `alpha`.
    pub fn displaced_thermal(n: f64, alpha: Complex<f64>) -> Result<Self> {
        if n.is_nan() || n < 0.0 {
            return Err(Error::NegativeOccupation(n));
        }
        let s2 = std::f64::consts::SQRT_2;
        Ok(GaussianState {
            mean: DVector::from_vec(vec![s2 * alpha.re, s2 * alpha.im]),
            cov: DMatrix::identity(2, 2) * (n + 0.5),
            mode_labels: default_labels(1),
        })
    }

    /// Block-diagonal product; the result carries the concatenated labels.
    pub fn tensor(states: &[GaussianState]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidParameter(
                "tensor product of no states".into(),
            ));
        }
        let dim: usize = states.iter().map(|s| s.mean.len()).sum();
        let mut mean = DVector::zeros(dim);
        let mut cov = DMatrix::zeros(dim, dim);
        let mut labels = Vec::new();
        let mut offset = 0;
        for s in states {
            let n = s.mean.len();
            mean.rows_mut(offset, n).copy_from(&s.mean);
            cov.view_mut((offset, offset), (n, n)).copy_from(&s.cov);
            labels.extend(s.mode_labels.iter().cloned());
            offset += n;
        }
        Ok(GaussianState {
            mean,
            cov,
            mode_labels: labels,
        })
    }

    /// Product state of the two cavities and the mechanics, labelled `a1, b, a2`.
    pub fn interface(
        cavity1: GaussianState,
        mechanics: GaussianState,
        cavity2: GaussianState,
    ) -> Result<Self> {
        let s = Self::tensor(&[cavity1, mechanics, cavity2])?;
        if s.n_modes() != 3 {
            return Err(Error::InvalidParameter(
                "interface state needs three single modes".into(),
            ));
        }
        Ok(s.with_labels(MODE_LABELS.iter().map(|l| l.to_string()).collect()))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n_modes());
        self.mode_labels = labels;
        self
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    fn check(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            Err(Error::BadIndex {
                index: mode,
                n_modes: self.n_modes(),
            })
        } else {
            Ok(())
        }
    }

    /// Marginal on the listed modes, in the order given.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter("reduction onto no modes".into()));
        }
        for (i, &m) in modes.iter().enumerate() {
            self.check(m)?;
            if modes[..i].contains(&m) {
                return Err(Error::InvalidParameter(format!("mode {m} listed twice")));
            }
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let n = idx.len();
        let mean = DVector::from_iterator(n, idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(n, n, |r, c| self.cov[(idx[r], idx[c])]);
        let labels = modes.iter().map(|&m| self.mode_labels[m].clone()).collect();
        Ok(GaussianState {
            mean,
            cov,
            mode_labels: labels,
        })
    }

    /// `⟨o† o⟩ = (σ_xx + σ_pp)/2 + (μ_x² + μ_p²)/2 - ½`.
    pub fn occupation(&self, mode: usize) -> Result<f64> {
        self.check(mode)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        Ok((self.cov[(x, x)] + self.cov[(p, p)]) / 2.0
            + (self.mean[x].powi(2) + self.mean[p].powi(2)) / 2.0
            - 0.5)
    }

    /// `⟨o⟩ = (μ_x + i μ_p)/√2`.
    pub fn amplitude(&self, mode: usize) -> Result<Complex<f64>> {
        self.check(mode)?;
        Ok(Complex::new(self.mean[2 * mode], self.mean[2 * mode + 1]) / std::f64::consts::SQRT_2)
    }

    /// Symplectic spectrum in ascending order.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.cov)
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()[0]
    }

    /// Uncertainty principle `σ + (i/2) Ω ⪰ 0`, i.e. every symplectic
    /// eigenvalue at least ½ up to [`PHYSICALITY_TOL`].
    pub fn is_physical(&self) -> bool {
        self.min_symplectic_eigenvalue() >= 0.5 - PHYSICALITY_TOL
    }

    pub fn is_finite(&self) -> bool {
        self.mean
            .iter()
            .chain(self.cov.iter())
            .all(|x| x.is_finite())
    }
}

/// Moduli of the eigenvalues of `i Ω σ`, each pair collapsed to one value.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Vec<f64> {
    let n = cov.nrows() / 2;
    let om = symplectic_form(n);
    let mut nu: Vec<f64> = (om * cov)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.im.abs())
        .collect();
    nu.sort_by(f64::total_cmp);
    nu.into_iter().step_by(2).collect()
}

pub fn vacuum(n_modes: usize) -> GaussianState {
    GaussianState::vacuum(n_modes)
}

pub fn thermal_state(n: f64) -> Result<GaussianState> {
    GaussianState::thermal(n)
}

pub fn coherent_state(alpha_re: f64, alpha_im: f64) -> GaussianState {
    GaussianState::coherent(alpha_re, alpha_im)
}

pub fn tensor(states: &[GaussianState]) -> Result<GaussianState> {
    GaussianState::tensor(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn vacuum_has_half_identity() {
        let v = vacuum(1);
        assert_eq!(v.cov, DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]));
        assert_eq!(vacuum(3).cov, DMatrix::identity(6, 6) * 0.5);
        assert_eq!(v.occupation(0).unwrap(), 0.0);
        assert!(v.is_physical());
    }

    #[test]
    fn thermal_occupations() {
        assert_eq!(thermal_state(0.0).unwrap(), vacuum(1));
        let t = thermal_state(3.0).unwrap();
        assert_eq!(t.cov, DMatrix::identity(2, 2) * 3.5);
        assert_eq!(t.occupation(0).unwrap(), 3.0);
        assert_eq!(
            thermal_state(1000.0).unwrap().occupation(0).unwrap(),
            1000.0
        );
        assert_eq!(thermal_state(-0.5), Err(Error::NegativeOccupation(-0.5)));
    }

    #[test]
    fn coherent_means() {
        assert_eq!(coherent_state(0.0, 0.0), vacuum(1));
        let c = coherent_state(1.0, 0.0);
        assert!((c.mean[0] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.mean[1], 0.0);
        assert!((c.occupation(0).unwrap() - 1.0).abs() < 1e-14);
        let c = coherent_state(0.0, 1.0);
        assert_eq!(c.mean[0], 0.0);
        assert!((c.mean[1] - 2f64.sqrt()).abs() < 1e-15);
        let a = coherent_state(0.3, -1.2).amplitude(0).unwrap();
        assert!((a - Complex::new(0.3, -1.2)).norm() < 1e-15);
    }

    #[test]
    fn tensor_of_vacua_is_vacuum() {
        let t = tensor(&[vacuum(1), vacuum(1), vacuum(1)]).unwrap();
        assert_eq!(t.mean, vacuum(3).mean);
        assert_eq!(t.cov, vacuum(3).cov);
        assert!(tensor(&[]).is_err());
    }

    #[test]
    fn transfer_initial_state_occupations() {
        let s = GaussianState::interface(
            coherent_state(1.0, 0.0),
            thermal_state(3.0).unwrap(),
            vacuum(1),
        )
        .unwrap();
        assert_eq!(s.mode_labels, vec!["a1", "b", "a2"]);
        let n: Vec<f64> = (0..3).map(|m| s.occupation(m).unwrap()).collect();
        assert!((n[0] - 1.0).abs() < 1e-14);
        assert_eq!(n[1], 3.0);
        assert_eq!(n[2], 0.0);
    }

    #[test]
    fn reduce_extracts_factors() {
        let a = GaussianState::displaced_thermal(2.0, Complex::new(0.5, 0.1)).unwrap();
        let b = thermal_state(1.0).unwrap();
        let s = tensor(&[a.clone(), b.clone()]).unwrap();
        let r = s.reduce(&[0]).unwrap();
        assert_eq!(r.mean, a.mean);
        assert_eq!(r.cov, a.cov);
        let v = vacuum(3).reduce(&[0, 2]).unwrap();
        assert_eq!(v.cov, vacuum(2).cov);
        assert_eq!(
            s.reduce(&[5]),
            Err(Error::BadIndex {
                index: 5,
                n_modes: 2
            })
        );
        assert!(s.reduce(&[1, 1]).is_err());
        assert_eq!(
            s.occupation(2),
            Err(Error::BadIndex {
                index: 2,
                n_modes: 2
            })
        );
    }

    #[test]
    fn symplectic_spectrum_of_product_state() {
        let s = tensor(&[
            thermal_state(2.0).unwrap(),
            vacuum(1),
            thermal_state(0.25).unwrap(),
        ])
        .unwrap();
        let nu = s.symplectic_eigenvalues();
        let want = [0.5, 0.75, 2.5];
        for (a, b) in nu.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn squeezed_vacuum_is_physical_but_overcompressed_is_not() {
        let r: f64 = 0.8;
        let sq = GaussianState::new(
            DVector::zeros(2),
            DMatrix::from_row_slice(
                2,
                2,
                &[0.5 * (-2.0 * r).exp(), 0.0, 0.0, 0.5 * (2.0 * r).exp()],
            ),
            vec!["s".into()],
        )
        .unwrap();
        assert!(sq.is_physical());
        assert!((sq.min_symplectic_eigenvalue() - 0.5).abs() < 1e-12);
        let bad = GaussianState::new(
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 0.5]),
            vec!["s".into()],
        )
        .unwrap();
        assert!(!bad.is_physical());
    }

    #[test]
    fn construction_symmetrizes() {
        let s = GaussianState::new(
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.1, 1.0]),
            vec!["m".into()],
        )
        .unwrap();
        assert!(max_abs_diff(&s.cov, &s.cov.transpose()) == 0.0);
        assert!(GaussianState::new(DVector::zeros(3), DMatrix::zeros(3, 3), vec![]).is_err());
    }
}
