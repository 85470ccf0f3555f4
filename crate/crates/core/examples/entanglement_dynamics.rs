// SPDX-License-Identifier: Apache-2.0

//! Cavity-cavity log-negativity under red/blue drives, with interference
//! peaks at (δ + 2Δλ) t = 2qπ.

use optomech::analysis::{local_maxima, log_negativity_series};
use optomech::gaussian::{thermal_state, vacuum};
use optomech::model::{build_quadrature_dynamics, effective_params, CAVITY_1, CAVITY_2};
use optomech::{GaussianState, SystemSpec};

fn main() -> optomech::Result<()> {
    let (c, s) = (1f64.cosh(), 1f64.sinh());
    for (name, g1, g2) in [("dl=0", (c * s).sqrt(), (c * s).sqrt()), ("dl=0.2", c, s)] {
        let spec = SystemSpec::red_blue(g1, g2, 5.0).with_n_th(1e3);
        let dl = effective_params(&spec)?.delta_lambda;
        for n_m in [0.0, 50.0, 1000.0] {
            let init = GaussianState::interface(vacuum(1), thermal_state(n_m)?, vacuum(1))?;
            let dt = 0.01;
            let series = log_negativity_series(
                &build_quadrature_dynamics(&spec, true),
                &init,
                dt,
                10001,
                CAVITY_1,
                CAVITY_2,
            )?;
            let values: Vec<f64> = series.iter().map(|p| p.log_negativity).collect();
            let best = series
                .iter()
                .max_by(|a, b| a.log_negativity.total_cmp(&b.log_negativity))
                .unwrap();
            println!(
                "{name:7} n_m = {n_m:6}: max E_N = {:.4} at t = {:.2}",
                best.log_negativity, best.t
            );
            if n_m == 50.0 {
                let period = 2.0 * std::f64::consts::PI / (spec.delta1 + 2.0 * dl);
                let peaks: Vec<String> = local_maxima(&values)
                    .into_iter()
                    .take(6)
                    .map(|k| format!("{:.2}({:.2})", k as f64 * dt, k as f64 * dt / period))
                    .collect();
                println!(
                    "        first peaks t (in units of 2pi/(delta+2dl)): {}",
                    peaks.join(" ")
                );
            }
        }
    }
    Ok(())
}
