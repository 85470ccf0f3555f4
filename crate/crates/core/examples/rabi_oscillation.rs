// SPDX-License-Identifier: Apache-2.0

//! Photon exchange between the two cavities through the detuned mechanics.
//!
//! cargo run --example rabi_oscillation -- [n_th] [n_b0]

use optomech::dynamics::sample_trajectory;
use optomech::gaussian::{thermal_state, vacuum};
use optomech::model::{build_quadrature_dynamics, effective_params, CAVITY_1, CAVITY_2, MECHANICS};
use optomech::{GaussianState, SystemSpec};

fn main() -> optomech::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("numeric argument"));
    let n_th = args.next().unwrap_or(0.0);
    let n_b0 = args.next().unwrap_or(3.0);

    let spec = SystemSpec::default().with_n_th(n_th);
    let lambda = effective_params(&spec)?.lambda;
    println!(
        "delta = {}, lambda = {lambda}, Rabi period pi/lambda = {:.4}",
        spec.delta1,
        std::f64::consts::PI / lambda
    );

    let init = GaussianState::interface(thermal_state(1.0)?, thermal_state(n_b0)?, vacuum(1))?;
    let dynamics = build_quadrature_dynamics(&spec, true);
    let dt = 0.25;
    let states = sample_trajectory(&dynamics, &init, dt, 401)?;
    println!("{:>8} {:>10} {:>10} {:>10}", "t", "N1", "N2", "Nb");
    for (k, s) in states.iter().enumerate().step_by(8) {
        println!(
            "{:8.2} {:10.5} {:10.5} {:10.5}",
            k as f64 * dt,
            s.occupation(CAVITY_1)?,
            s.occupation(CAVITY_2)?,
            s.occupation(MECHANICS)?
        );
    }
    Ok(())
}
