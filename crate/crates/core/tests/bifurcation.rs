use std::f64::consts::PI;

use torus_srb::bifurcation::{find_sign_change, smoothness_diagnostic, srb_integral, sweep, SmoothGrid};
use torus_srb::dynamics::{orbit_raster, OrbitSpec};
use torus_srb::maps::Family;
use torus_srb::Error;

fn theoretical() -> Family {
    Family::Theoretical {
        epsilon: 0.01,
        delta: 0.01,
        m: 7,
    }
}

#[test]
fn coarse_sweep_changes_sign() {
    let table = sweep(&Family::experimental_default(), -0.02, 0.02, 1e-3, &OrbitSpec::random(1)).unwrap();
    assert_eq!(table.len(), 41);
    assert!(table.records[0].chi_c < 0.0);
    assert!(table.records[40].chi_c > 0.0);
    assert!(table.records.windows(2).all(|w| w[0].a < w[1].a));
}

#[test]
fn fine_sweep_has_a_single_crossing() {
    let table = sweep(&Family::experimental_default(), -0.004, 0.004, 1e-4, &OrbitSpec::random(1)).unwrap();
    assert_eq!(table.len(), 81);
    assert_eq!(table.sign_changes().len(), 1, "{:?}", table.sign_changes());
}

#[test]
fn theoretical_exponent_positive_for_large_offsets() {
    let table = sweep(&theoretical(), 1.0, 2.0, 0.5, &OrbitSpec::random(9)).unwrap();
    assert_eq!(table.len(), 3);
    assert!(table.records.iter().all(|r| r.chi_c > 0.0));
}

#[test]
fn theoretical_bisection_bracket_is_valid() {
    let spec = OrbitSpec::random(4).with_length(200_000);
    let sc = find_sign_change(&theoretical(), (-0.02, 1.0), 1e-3, &spec).unwrap();
    let (lo, hi) = sc.a0_bracket;
    assert!(sc.chi_at_lo < 0.0 && sc.chi_at_hi > 0.0);
    assert!(hi - lo <= 1e-3 && -0.02 <= lo && hi <= 1.0);
}

#[test]
fn positive_bracket_is_rejected() {
    let err = find_sign_change(&Family::experimental_default(), (0.01, 0.02), 1e-4, &OrbitSpec::random(1));
    assert!(matches!(err, Err(Error::NoBracket { .. })));
}

#[test]
fn first_differences_settle_as_h_halves() {
    let sine = |_: f64, y: f64| (2.0 * PI * y).sin();
    let table = smoothness_diagnostic(
        &Family::experimental_default(),
        0.005,
        &[4e-4, 2e-4, 1e-4],
        &sine,
        SmoothGrid::default(),
    )
    .unwrap();
    assert!(!table.slow_mixing);
    assert!(table.max_relative_change() <= 0.1, "{table:?}");
}

#[test]
fn trapped_band_mass_agrees_with_orbit() {
    let fam = Family::experimental_default();
    let raster = orbit_raster(
        &fam.at(-0.02).unwrap(),
        &OrbitSpec::random(6).with_burn_in(1_000).with_length(999_000),
        128,
        128,
    )
    .unwrap();
    // start row of the fullest 0.2-high window
    let rows = raster.row_totals();
    let height = (0.2 * 128.0) as usize;
    let start = (0..128)
        .max_by_key(|&s| (0..height).map(|k| rows[(s + k) % 128]).sum::<u64>())
        .unwrap();
    let lo = start as f64 / 128.0;
    let band = move |_: f64, y: f64| if (y - lo).rem_euclid(1.0) < height as f64 / 128.0 { 1.0 } else { 0.0 };

    let grid = SmoothGrid { nx: 64, ny: 128, strata: 64 };
    let (mass, slow) = srb_integral(&fam, -0.02, &band, grid).unwrap();
    assert!(!slow);
    assert!(mass >= 0.99, "Ulam band mass {mass}");
    assert!((mass - raster.max_band_fraction(height as f64 / 128.0)).abs() < 1e-2);

    let table = smoothness_diagnostic(&fam, -0.02, &[1e-3], &band, grid).unwrap();
    let row = &table.rows[0];
    assert!((row.value_plus - mass).abs() < 1e-2 && (row.value_minus - mass).abs() < 1e-2);
}
