//! Ulam matrix of the experimental map: stationary density, spectral gap and
//! the SRB average of `log f'` against the orbit average.

use torus_srb::dynamics::{central_lyapunov, OrbitSpec};
use torus_srb::maps::Family;
use torus_srb::transfer::{integrate_observable, stationary_density, ulam_2d, DEFAULT_MAX_ITER, DEFAULT_TOL};

fn main() -> torus_srb::Result<()> {
    let a = 0.01;
    let system = Family::experimental_default().at(a)?;
    let op = ulam_2d(&system, 256, 256, 64, 1)?;
    println!("{} cells, {} nonzeros", op.n(), op.nnz());

    let report = stationary_density(&op, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    println!(
        "power iteration: {} steps, residual {:.2e}, subleading |lambda| = {:.4}, gap = {:.4}",
        report.iterations,
        report.residual,
        report.subleading_modulus,
        report.gap()
    );

    let f = system.fiber().clone();
    let ulam = integrate_observable(&report.stationary, op.grid(), |_, y| f.deriv(y).ln());
    let birkhoff = central_lyapunov(&system, &OrbitSpec::random(1))?.chi_c;
    println!("int log f' dmu = {ulam:.5}, orbit average = {birkhoff:.5}");
    Ok(())
}
