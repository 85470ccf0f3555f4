// SPDX-License-Identifier: Apache-2.0

//! Rotating-wave generator against the full drive-frame generator.

use optomech::dynamics::propagate;
use optomech::gaussian::{coherent_state, thermal_state, vacuum};
use optomech::model::{build_quadrature_dynamics, transfer_time, MODE_LABELS};
use optomech::{GaussianState, SystemSpec};

fn main() -> optomech::Result<()> {
    for omega_m in [20.0, 50.0, 100.0, 200.0] {
        let mut spec = SystemSpec::default().with_n_th(10.0);
        spec.omega_m = omega_m;
        let t0 = transfer_time(&spec)?;
        let init =
            GaussianState::interface(coherent_state(1.0, 0.0), thermal_state(3.0)?, vacuum(1))?;
        let rwa = propagate(&build_quadrature_dynamics(&spec, true), &init, t0)?;
        let full = propagate(&build_quadrature_dynamics(&spec, false), &init, t0)?;
        let diffs: Vec<String> = (0..3)
            .map(|m| {
                Ok(format!(
                    "{}: {:+.2e}",
                    MODE_LABELS[m],
                    full.occupation(m)? - rwa.occupation(m)?
                ))
            })
            .collect::<optomech::Result<_>>()?;
        println!("omega_m = {omega_m:5}: {}", diffs.join("  "));
    }
    Ok(())
}
