//! Finite differences of `a ↦ ∫ sin 2πy dμ_a` on a shrinking step ladder.

use std::f64::consts::PI;

use torus_srb::bifurcation::{smoothness_diagnostic, SmoothGrid};
use torus_srb::maps::Family;

fn main() -> torus_srb::Result<()> {
    let sine = |_: f64, y: f64| (2.0 * PI * y).sin();
    let table = smoothness_diagnostic(
        &Family::experimental_default(),
        0.005,
        &[4e-4, 2e-4, 1e-4],
        &sine,
        SmoothGrid::default(),
    )?;
    println!("I(0.005) = {:.8}", table.value);
    println!("{:>8} {:>12} {:>12}", "h", "I'", "I''");
    for r in &table.rows {
        println!("{:>8.1e} {:>12.6} {:>12.3}", r.h, r.first_difference, r.second_difference);
    }
    println!("largest relative change of I' = {:.3}", table.max_relative_change());
    Ok(())
}
