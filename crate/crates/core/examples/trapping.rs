//! Checks that the theoretical family maps its trapping strip into itself.

use torus_srb::dynamics::check_trapping;
use torus_srb::maps::Family;

fn main() -> torus_srb::Result<()> {
    let family = Family::Theoretical {
        epsilon: 0.01,
        delta: 0.01,
        m: 7,
    };
    for a in [-0.05, -0.02, -0.01] {
        let r = check_trapping(&family, a, 2_000)?;
        println!(
            "a = {a:+}: strip [{:.6}, {:.6}] holds = {} margin = {:.3e} ({} samples)",
            r.y_lower, r.y_upper, r.holds, r.worst_margin, r.samples
        );
    }
    Ok(())
}
