// SPDX-License-Identifier: Apache-2.0

//! Coherent-state transfer at t0 = π/(2λ): closed form against propagation.

use nalgebra::Complex;
use optomech::analysis::{interference_order, transfer_fidelity};
use optomech::model::transfer_time;
use optomech::SystemSpec;

fn main() -> optomech::Result<()> {
    let alpha = Complex::new(1.0, 0.0);
    let n_m = 20.0;
    println!(
        "{:>6} {:>6} {:>4} {:>9} {:>9} {:>9} {:>9}",
        "delta", "n_th", "q", "F1", "F2", "F", "F_exact"
    );
    for delta in [6.0, 8.0, 10.0, 12.0] {
        for n_th in [0.0, 150.0, 300.0] {
            let spec = SystemSpec::default().with_detuning(delta).with_n_th(n_th);
            let t0 = transfer_time(&spec)?;
            let f = transfer_fidelity(&spec, alpha, n_m, t0)?;
            let q = interference_order(&spec, t0)?.map_or("-".to_string(), |q| q.to_string());
            println!(
                "{delta:6.1} {n_th:6.0} {q:>4} {:9.5} {:9.5} {:9.5} {:9.5}",
                f.f1,
                f.f2,
                f.f,
                f.f_exact.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
