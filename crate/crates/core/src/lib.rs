// SPDX-License-Identifier: Apache-2.0

//! Linearized dynamics of a two-cavity optomechanical interface coupled
//! through one mechanical mode, in the Gaussian (covariance) picture.
//!
//! Modes are ordered `(a1, b, a2)`, quadratures are interleaved
//! `(x1, p1, xb, pb, x2, p2)` with `x = (o + o†)/√2`, so the vacuum
//! covariance is `½·I`. Rates are in units of the coupling scale `G` and
//! times in units of `1/G`. Logarithmic negativity uses the natural log.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod model;
pub mod scenario;

pub use error::{Error, Result};
pub use gaussian::GaussianState;
pub use model::{DriveCase, SystemSpec};

/// Crate version together with the normalization conventions.
pub const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (vacuum variance = 1/2, log-negativity = natural log)"
);
