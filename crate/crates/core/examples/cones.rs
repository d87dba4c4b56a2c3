//! Invariant cone aperture and the transversality count for growing base
//! multipliers.

use torus_srb::cones::{cone_invariance_margin, min_cone_constant, transversality_measure, ConeParams};
use torus_srb::maps::Family;

fn main() -> torus_srb::Result<()> {
    let family = Family::experimental_default();
    let base = family.at(0.0)?;
    let c0 = min_cone_constant(&base, 100_000)?;
    let margin = cone_invariance_margin(&base, &ConeParams::for_system(&base, c0), 256);
    println!("c0 = {c0:.6}, invariance margin {margin:.2e}");

    println!("{:>4} {:>6} {:>8} {:>8} {:>8}", "m", "count", "m(F)", "overlap", "stable");
    for m in [7, 17, 37, 77] {
        let sys = family.with_m(m).at(0.0)?;
        let r = transversality_measure(&sys, &ConeParams::for_system(&sys, c0), 64)?;
        println!(
            "{m:>4} {:>6} {:>8.4} {:>8} {:>8}",
            r.max_count,
            r.value,
            r.max_overlap_count,
            r.stable()
        );
    }
    Ok(())
}
