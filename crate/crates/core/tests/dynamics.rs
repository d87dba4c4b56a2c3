use torus_srb::dynamics::{
    central_lyapunov, check_trapping, fiber_fixed_points, iterate, orbit_raster, OrbitSpec, Stability,
};
use torus_srb::maps::{Family, FiberMap, SkewSystem};

fn theoretical() -> Family {
    Family::Theoretical {
        epsilon: 0.01,
        delta: 0.01,
        m: 7,
    }
}

#[test]
fn negative_exponent_below_the_saddle_node_positive_above_one() {
    let spec = OrbitSpec::random(11);
    for (a, negative) in [(-0.03, true), (-0.02, true), (1.0, false), (1.5, false), (2.0, false)] {
        let chi = central_lyapunov(&theoretical().at(a).unwrap(), &spec).unwrap().chi_c;
        assert_eq!(chi < 0.0, negative, "a = {a}: chi_c = {chi}");
    }
}

#[test]
fn unstable_exponent_is_log_seven() {
    let est = central_lyapunov(&Family::experimental_default().at(0.0).unwrap(), &OrbitSpec::random(2)).unwrap();
    assert!((est.chi_u - 7f64.ln()).abs() < 1e-12);
}

#[test]
fn orbit_stays_on_the_torus() {
    let sys = Family::experimental_default().at(0.013).unwrap();
    let spec = OrbitSpec::random(5).with_burn_in(0).with_length(100_000);
    for p in iterate(&sys, &spec) {
        assert!((0.0..1.0).contains(&p.x()) && (0.0..1.0).contains(&p.y()));
    }
}

#[test]
fn trapped_and_spread_rasters() {
    let fam = Family::experimental_default();
    let spec = OrbitSpec::random(3).with_burn_in(1_000).with_length(999_000);
    let trapped = orbit_raster(&fam.at(-0.02).unwrap(), &spec, 512, 512).unwrap();
    assert_eq!(trapped.total(), 999_000);
    assert!(trapped.max_band_fraction(0.2) >= 0.99);
    assert!(trapped.nonzero_rows() as f64 <= 0.2 * 512.0);
    let spread = orbit_raster(&fam.at(-0.002).unwrap(), &spec, 512, 512).unwrap();
    assert_eq!(spread.nonempty_bands(32), 32);
}

#[test]
fn trapping_margins_shrink_towards_the_saddle_node() {
    let deep = check_trapping(&theoretical(), -0.02, 2_000).unwrap();
    let shallow = check_trapping(&theoretical(), -0.01, 2_000).unwrap();
    assert!(deep.holds && shallow.holds);
    assert!(deep.worst_margin > shallow.worst_margin);
    assert!(deep.upper_edge_excess <= 0.0);
    assert!(check_trapping(&theoretical(), 0.001, 2_000).is_err());
}

#[test]
fn fixed_point_structure_across_the_saddle_node() {
    let below = fiber_fixed_points(&FiberMap::intermittent(0.01, -0.02).unwrap());
    let stab = below.stabilities();
    assert!(stab.contains(&Stability::Attracting) && stab.contains(&Stability::Repelling));
    let above = fiber_fixed_points(&FiberMap::intermittent(0.01, 0.02).unwrap());
    assert!(above.stabilities().iter().all(|s| *s == Stability::Repelling));
    let doubling = SkewSystem::new(7, FiberMap::doubling(0.0), 0.0).unwrap();
    assert_eq!(fiber_fixed_points(doubling.fiber()).len(), 1);
}
