// SPDX-License-Identifier: Apache-2.0

//! Sequential resonant swaps through the mechanics, the thermally exposed
//! baseline for the large-detuning transfer.

use nalgebra::Complex;
use optomech::analysis::double_swap_fidelity;
use optomech::scenario::{optimize_detuning_by, Objective};
use optomech::SystemSpec;

fn main() -> optomech::Result<()> {
    let alpha = Complex::new(1.0, 0.0);
    let n_m = 20.0;
    println!("{:>6} {:>10} {:>10}", "n_th", "F_swap", "F_detuned");
    for n_th in [0.0, 50.0, 150.0, 300.0, 600.0, 1000.0] {
        let spec = SystemSpec::default().with_n_th(n_th);
        let swap = double_swap_fidelity(&spec, alpha, n_m, true)?;
        let detuned = optimize_detuning_by(&spec, n_th, alpha, n_m, 400, Objective::Exact)?;
        println!(
            "{n_th:6.0} {swap:10.5} {:10.5}",
            detuned.fidelity.f_exact.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
