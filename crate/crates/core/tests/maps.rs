use proptest::prelude::*;
use torus_srb::maps::{circle_diff, FiberMap, SkewSystem, TorusPoint, PREIMAGE_TOL};

fn systems() -> impl Strategy<Value = SkewSystem> {
    prop_oneof![
        (-0.05f64..0.05).prop_map(|a| SkewSystem::experimental(a, 0.01, 7).unwrap()),
        (-2.0f64..2.0).prop_map(|a| SkewSystem::theoretical(0.01, a, 0.01, 7).unwrap()),
        (prop_oneof![Just(3u32), Just(7), Just(17)], 0.0f64..1.0)
            .prop_map(|(m, off)| SkewSystem::new(m, FiberMap::doubling(off), 0.02).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn preimages_have_full_degree_and_round_trip(sys in systems(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let p = TorusPoint::new(x, y);
        let pre = sys.preimages(p, PREIMAGE_TOL).unwrap();
        prop_assert_eq!(pre.len(), 2 * sys.m() as usize);
        for (i, q) in pre.iter().enumerate() {
            prop_assert!(sys.eval(*q).distance(&p) <= 10.0 * PREIMAGE_TOL);
            for r in &pre[i + 1..] {
                prop_assert!(q.distance(r) > PREIMAGE_TOL);
            }
        }
    }

    #[test]
    fn lift_has_degree_two(a in -2.0f64..2.0, y in 0.0f64..1.0) {
        let f = FiberMap::intermittent(0.01, a).unwrap();
        prop_assert!((f.lift(y + 1.0) - f.lift(y) - 2.0).abs() <= 1e-12);
        let g = FiberMap::experimental(a);
        prop_assert!((g.lift(y + 1.0) - g.lift(y) - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn determinant_is_base_times_fiber(sys in systems(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let p = TorusPoint::new(x, y);
        let j = sys.jacobian(p);
        prop_assert_eq!(j.det(), sys.m() as f64 * sys.fiber().deriv(y));
        prop_assert_eq!(j.matrix()[0][1], 0.0);
    }

    #[test]
    fn intermittent_derivative_box(a in -2.0f64..2.0, y in 0.0f64..1.0) {
        let d = FiberMap::intermittent(0.01, a).unwrap().deriv(y);
        prop_assert!((2.0 / 3.0..=10.0 / 3.0).contains(&d));
    }
}

#[test]
fn experimental_preimages_of_quarter_point() {
    let sys = SkewSystem::experimental(0.0, 0.01, 7).unwrap();
    let p = TorusPoint::new(0.5, 0.25);
    let pre = sys.preimages(p, PREIMAGE_TOL).unwrap();
    assert_eq!(pre.len(), 14);
    for q in pre {
        assert!(sys.eval(q).distance(&p) <= 1e-11);
    }
}

#[test]
fn doubling_preimages_of_origin() {
    let sys = SkewSystem::new(7, FiberMap::doubling(0.0), 0.0).unwrap();
    let pre = sys.preimages(TorusPoint::new(0.0, 0.0), PREIMAGE_TOL).unwrap();
    let near = |c: f64| pre.iter().filter(|q| circle_diff(q.y(), c).abs() < 1e-12).count();
    assert_eq!((near(0.0), near(0.5)), (7, 7));
}
