//! The parameter sweep of the central exponent, written as CSV.
//!
//! `cargo run --example sweep -- sweep.csv`

use std::path::PathBuf;

use torus_srb::bifurcation::sweep;
use torus_srb::cli::output::write_sweep_csv;
use torus_srb::dynamics::OrbitSpec;
use torus_srb::maps::Family;

fn main() -> torus_srb::Result<()> {
    let path = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "sweep.csv".into()));
    let table = sweep(&Family::experimental_default(), -0.02, 0.02, 1e-3, &OrbitSpec::random(1))?;
    for r in &table.records {
        println!("{:>7.3} {:>10.6}", r.a, r.chi_c);
    }
    for k in table.sign_changes() {
        println!("sign change between a = {:.4} and {:.4}", table.records[k].a, table.records[k + 1].a);
    }
    write_sweep_csv(&table, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
