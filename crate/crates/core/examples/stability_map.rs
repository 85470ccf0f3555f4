// SPDX-License-Identifier: Apache-2.0

//! Routh–Hurwitz verdict against the drift spectrum over (G1/G2, δ).

use optomech::analysis::stability;
use optomech::SystemSpec;

fn main() {
    let ratios: Vec<f64> = (0..21).map(|k| 0.5 + 1.5 * k as f64 / 20.0).collect();
    let deltas: Vec<f64> = (0..11).map(|k| 2.0 * k as f64).collect();
    println!(
        "rows: G1/G2 (G2=1); cols: delta. '+' stable, '.' unstable, '!' closed form disagrees"
    );
    print!("{:>6} ", "");
    for d in &deltas {
        print!("{d:>3.0}");
    }
    println!();
    let mut disagreements = 0;
    for r in &ratios {
        print!("{r:6.3} ");
        for d in &deltas {
            let report = stability(&SystemSpec::red_blue(*r, 1.0, *d));
            let mark = match report.agrees() {
                Some(false) => {
                    disagreements += 1;
                    '!'
                }
                _ if report.numeric_stable => '+',
                _ => '.',
            };
            print!("{mark:>3}");
        }
        println!();
    }
    println!("disagreements: {disagreements}");
}
