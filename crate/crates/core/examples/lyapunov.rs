//! Central Lyapunov exponent of the experimental family at a few offsets.

use torus_srb::dynamics::{central_lyapunov, OrbitSpec};
use torus_srb::maps::Family;

fn main() -> torus_srb::Result<()> {
    let family = Family::experimental_default();
    let spec = OrbitSpec::random(1);
    println!("{:>8} {:>12} {:>10}", "a", "chi_c", "chi_u");
    for a in [-0.02, -0.005, -0.001, 0.0, 0.005, 0.02] {
        let est = central_lyapunov(&family.at(a)?, &spec)?;
        println!("{a:>8.3} {:>12.6} {:>10.6}", est.chi_c, est.chi_u);
    }
    Ok(())
}
