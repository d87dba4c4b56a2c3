//! Builds the window profile φ and checks its four defining conditions.

use torus_srb::maps::{validate_phi, BumpProfile, PhiCondition};

fn main() -> torus_srb::Result<()> {
    let phi = BumpProfile::standard()?;
    let report = validate_phi(&phi, 100_000);
    for c in [
        PhiCondition::Bounds,
        PhiCondition::Support,
        PhiCondition::Tangency,
        PhiCondition::BelowDiagonal,
    ] {
        let check = report.check(c);
        println!("({:<3}) {:<13} pass = {:<5} margin = {:.3e}", c.label(), format!("{c:?}"), check.pass, check.worst_margin);
    }
    println!("all conditions hold: {}", report.passed());

    println!("\n{:>6} {:>12} {:>12}", "t", "phi", "phi'");
    for k in 0..=10 {
        let t = k as f64 / 10.0;
        println!("{t:>6.2} {:>12.6} {:>12.6}", phi.value(t), phi.derivative(t));
    }
    Ok(())
}
