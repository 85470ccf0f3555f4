// SPDX-License-Identifier: Apache-2.0

//! Stationary log-negativity from the Lyapunov equation versus bath occupation.

use optomech::analysis::{logarithmic_negativity, stability};
use optomech::dynamics::steady_state;
use optomech::model::{build_quadrature_dynamics, CAVITY_1, CAVITY_2};
use optomech::SystemSpec;

fn main() -> optomech::Result<()> {
    let (c, s) = (1f64.cosh(), 1f64.sinh());
    let g = (c * s).sqrt();
    let configs = [
        ("G1=G2, d=15", g, g, 15.0),
        ("cosh/sinh, d=15", c, s, 15.0),
        ("cosh/sinh, d=0", c, s, 0.0),
    ];
    for (name, g1, g2, delta) in configs {
        let spec = SystemSpec::red_blue(g1, g2, delta);
        println!("{name}: max Re = {:.3e}", stability(&spec).max_real_part);
        for n_th in [0.0, 100.0, 500.0, 1000.0, 2000.0] {
            let ss = steady_state(&build_quadrature_dynamics(&spec.with_n_th(n_th), true))?;
            println!(
                "  n_th = {n_th:6}: E_N = {:.4}",
                logarithmic_negativity(&ss, CAVITY_1, CAVITY_2)?
            );
        }
    }
    // blue-dominated at zero detuning has no steady state
    let err = steady_state(&build_quadrature_dynamics(
        &SystemSpec::red_blue(1.0, 1.2, 0.0),
        true,
    ))
    .unwrap_err();
    println!("G1 < G2, d = 0: {err}");
    Ok(())
}
