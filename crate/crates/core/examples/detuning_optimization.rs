// SPDX-License-Identifier: Apache-2.0

//! Trade-off between thermal heating and cavity decay on δ = 2G√q.

use nalgebra::Complex;
use optomech::scenario::{optimize_detuning_by, Objective};
use optomech::SystemSpec;

fn main() -> optomech::Result<()> {
    let alpha = Complex::new(1.0, 0.0);
    println!(
        "{:>6} | {:>7} {:>9} {:>9} | {:>7} {:>9}",
        "n_th", "d_cf", "F_cf", "F_ex@cf", "d_ex", "F_ex"
    );
    for n_th in [0.0, 50.0, 150.0, 300.0, 1000.0] {
        let spec = SystemSpec::default();
        let cf = optimize_detuning_by(&spec, n_th, alpha, 20.0, 400, Objective::ClosedForm)?;
        let ex = optimize_detuning_by(&spec, n_th, alpha, 20.0, 400, Objective::Exact)?;
        println!(
            "{n_th:6.0} | {:7.3} {:9.5} {:9.5} | {:7.3} {:9.5}",
            cf.delta,
            cf.fidelity.f,
            cf.fidelity.f_exact.unwrap_or(f64::NAN),
            ex.delta,
            ex.fidelity.f_exact.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
