//! Locates the parameter where the central exponent changes sign.

use torus_srb::bifurcation::find_sign_change;
use torus_srb::dynamics::OrbitSpec;
use torus_srb::maps::Family;

fn main() -> torus_srb::Result<()> {
    let sc = find_sign_change(&Family::experimental_default(), (-0.004, 0.004), 1e-4, &OrbitSpec::random(1))?;
    let (lo, hi) = sc.a0_bracket;
    println!("a0 in [{lo:.6}, {hi:.6}] after {} steps", sc.iterations);
    println!("chi_c = {:.3e} at lo, {:.3e} at hi", sc.chi_at_lo, sc.chi_at_hi);
    if !sc.noisy_midpoints.is_empty() {
        println!("seeds disagreed at {:?}", sc.noisy_midpoints);
    }
    Ok(())
}
