//! Pointwise transfer operator against the duality `∫ (P u) v = ∫ u (v ∘ F)`.

use std::f64::consts::PI;

use torus_srb::maps::{Family, TorusPoint};
use torus_srb::transfer::pf_apply_exact;

fn main() -> torus_srb::Result<()> {
    let system = Family::experimental_default().at(0.01)?;
    let u = |x: f64, y: f64| 1.0 + (2.0 * PI * y).sin() * (2.0 * PI * x).cos();
    let v = |x: f64, y: f64| (2.0 * PI * y).cos() + 0.5 * (2.0 * PI * x).cos() * (2.0 * PI * y).sin();

    let n = 256;
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            let p = TorusPoint::new((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64);
            let fp = system.eval(p);
            lhs += pf_apply_exact(&system, u, p)? * v(p.x(), p.y());
            rhs += u(p.x(), p.y()) * v(fp.x(), fp.y());
        }
    }
    let cells = (n * n) as f64;
    println!("int (Pu) v  = {:.15}", lhs / cells);
    println!("int u (v.F) = {:.15}", rhs / cells);
    println!("P1 at (0.3, 0.7) = {:.12}", pf_apply_exact(&system, |_, _| 1.0, TorusPoint::new(0.3, 0.7))?);
    Ok(())
}
