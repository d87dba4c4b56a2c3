//! Trapped and spread orbits as PGM images.
//!
//! `cargo run --example orbit_raster -- out_dir`

use std::path::PathBuf;

use torus_srb::cli::output::write_pgm;
use torus_srb::dynamics::{orbit_raster, OrbitSpec};
use torus_srb::maps::Family;

fn main() -> torus_srb::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let family = Family::experimental_default();
    let spec = OrbitSpec::random(3).with_burn_in(1_000).with_length(999_000);
    for a in [-0.02, -0.002] {
        let raster = orbit_raster(&family.at(a)?, &spec, 512, 512)?;
        let path = dir.join(format!("orbit_{a}.pgm"));
        write_pgm(&raster, &path, 0.5)?;
        println!(
            "a = {a}: mass in best 0.2 band {:.4}, {} of 32 bands hit, {} rows occupied -> {}",
            raster.max_band_fraction(0.2),
            raster.nonempty_bands(32),
            raster.nonzero_rows(),
            path.display()
        );
    }
    Ok(())
}
