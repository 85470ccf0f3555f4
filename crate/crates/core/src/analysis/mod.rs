// SPDX-License-Identifier: Apache-2.0

//! Observables and diagnostics built on top of the dynamics.

mod eigenmodes;
mod entanglement;
mod fidelity;
mod stability;

pub use eigenmodes::{
    eigenmodes_analytic, eigenmodes_numeric, EigenmodeSet, ModeLabel, DEGENERACY_TOL,
};
pub use entanglement::{
    local_maxima, log_negativity_series, logarithmic_negativity, partial_transpose_min_eigenvalue,
    NegativitySample,
};
pub use fidelity::{
    double_swap_fidelity, interference_order, phase_matched_target, simulate_transfer,
    transfer_fidelity, transfer_fidelity_closed_form, transfer_fidelity_exact, FidelityBreakdown,
};
pub use stability::{routh_hurwitz, stability, stability_of, RouthHurwitz, StabilityReport};
