// SPDX-License-Identifier: Apache-2.0

use nalgebra::Complex;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "detuning of cavity {cavity} is zero; the adiabatic elimination needs a finite offset"
    )]
    ZeroDetuning { cavity: usize },

    #[error("unsupported parameter regime: {0}")]
    UnsupportedCase(String),

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    BadIndex { index: usize, n_modes: usize },

    #[error("mean occupation must be non-negative, got {0}")]
    NegativeOccupation(f64),

    #[error("propagation to t = {t} produced non-finite moments")]
    NonFiniteResult { t: f64 },

    #[error("drift is not asymptotically stable (largest real part {max_real_part:e})")]
    Unstable { max_real_part: f64 },

    #[error("eigenvalues {values:?} are degenerate; dark/bright labels are ambiguous")]
    DegenerateSpectrum { values: [Complex<f64>; 3] },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
