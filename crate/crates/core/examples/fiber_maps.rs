//! Fixed points of the intermittent fiber map across the saddle-node and a
//! uniform-expansion certificate for large offsets.

use torus_srb::dynamics::{fiber_fixed_points, min_iterate_derivative, uniform_expansion_certificate};
use torus_srb::maps::FiberMap;

fn main() -> torus_srb::Result<()> {
    let eps = 0.01;
    for a in [-0.05, -0.01, 0.0, 0.01] {
        let f = FiberMap::intermittent(eps, a)?;
        println!("a = {a:+.3}");
        for p in fiber_fixed_points(&f).points {
            println!("    y = {:.8}  f'(y) = {:.6}  {:?}", p.location, p.derivative, p.stability);
        }
    }

    let f = FiberMap::intermittent(eps, 1.0)?;
    let cert = uniform_expansion_certificate(&f, 4, 100_000);
    println!("\na = 1: certified = {}, after {} iterates", cert.certified, cert.worst_n);
    println!("min (f^2)' on the grid = {:.6}", min_iterate_derivative(&f, 2, 100_000));
    Ok(())
}
