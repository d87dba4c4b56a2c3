use serde::Serialize;

use crate::maps::{circle_diff, FiberMap};

pub const DEFAULT_SCAN_INTERVALS: usize = 1_000_000;
/// `|f' - 1|` at or below this is labelled neutral.
pub const NEUTRAL_TOL: f64 = 1e-6;
const ROOT_TOL: f64 = 1e-14;
const TANGENCY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Repelling,
    Attracting,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub location: f64,
    pub derivative: f64,
    pub stability: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberFixedPoints {
    /// Sorted by location in `[0, 1)`.
    pub points: Vec<FixedPoint>,
}

impl FiberFixedPoints {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn stabilities(&self) -> Vec<Stability> {
        self.points.iter().map(|p| p.stability).collect()
    }
}

fn classify(derivative: f64) -> Stability {
    let d = derivative.abs();
    if (d - 1.0).abs() <= NEUTRAL_TOL {
        Stability::Neutral
    } else if d < 1.0 {
        Stability::Attracting
    } else {
        Stability::Repelling
    }
}

pub fn fiber_fixed_points(f: &FiberMap) -> FiberFixedPoints {
    fiber_fixed_points_with(f, DEFAULT_SCAN_INTERVALS)
}

/// Fixed points of `f` on the circle: solutions of `L(y) - y ∈ ℤ`.
///
/// Transversal roots come from a sign-change scan over `intervals` equal
/// subintervals refined by bisection. Tangential roots (the neutral point of
/// the saddle-node) have no sign change, so critical points of `L(y) - y`
/// are also located and accepted when the residual there is below `10⁻¹²`.
pub fn fiber_fixed_points_with(f: &FiberMap, intervals: usize) -> FiberFixedPoints {
    let n = intervals.max(16);
    let g = |y: f64| f.lift(y) - y;
    let dg = |y: f64| f.deriv(y) - 1.0;
    let nodes: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let vals: Vec<f64> = nodes.iter().map(|&y| g(y)).collect();
    let slopes: Vec<f64> = nodes.iter().map(|&y| dg(y)).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut roots: Vec<f64> = Vec::new();
    let k_lo = (lo - TANGENCY_TOL).ceil() as i64;
    let k_hi = (hi + TANGENCY_TOL).floor() as i64;
    for k in k_lo..=k_hi {
        let kf = k as f64;
        for i in 0..n {
            let (a, b) = (vals[i] - kf, vals[i + 1] - kf);
            if a == 0.0 {
                roots.push(nodes[i]);
            } else if a * b < 0.0 {
                roots.push(bisect(|y| g(y) - kf, nodes[i], nodes[i + 1], a < 0.0));
            }
        }
    }
    // tangential roots: local extrema of g touching an integer
    for i in 0..n {
        if slopes[i] * slopes[i + 1] < 0.0 {
            let y = bisect(dg, nodes[i], nodes[i + 1], slopes[i] < 0.0);
            let v = g(y);
            if (v - v.round()).abs() <= TANGENCY_TOL {
                roots.push(y);
            }
        }
    }

    roots.sort_by(|a, b| a.total_cmp(b));
    let mut points: Vec<FixedPoint> = Vec::new();
    for y in roots {
        let y = if y >= 1.0 { y - 1.0 } else { y };
        if points.iter().any(|p| circle_diff(p.location, y).abs() < 1e-9) {
            continue;
        }
        let derivative = f.deriv(y);
        points.push(FixedPoint {
            location: y,
            derivative,
            stability: classify(derivative),
        });
    }
    points.sort_by(|a, b| a.location.total_cmp(&b.location));
    FiberFixedPoints { points }
}

/// Bisection for a sign change of `h` on `[lo, hi]`; `rising` says whether
/// `h(lo) < 0`.
fn bisect(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rising: bool) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(f: &FiberMap, y: f64) -> f64 {
        let v = f.lift(y) - y;
        (v - v.round()).abs()
    }

    #[test]
    fn saddle_node_point_at_zero_offset() {
        let f = FiberMap::intermittent(0.01, 0.0).unwrap();
        let fp = fiber_fixed_points(&f);
        assert_eq!(fp.len(), 2, "{fp:?}");
        assert_eq!(fp.points[0].location, 0.0);
        assert_eq!(fp.points[0].stability, Stability::Repelling);
        assert!((fp.points[1].location - 0.005).abs() < 1e-6);
        assert_eq!(fp.points[1].stability, Stability::Neutral);
        for p in &fp.points {
            assert!(residual(&f, p.location) <= 1e-12);
        }
    }

    #[test]
    fn three_points_below_the_saddle_node() {
        let eps = 0.01;
        let f = FiberMap::intermittent(eps, -0.05).unwrap();
        let fp = fiber_fixed_points(&f);
        assert_eq!(fp.len(), 3, "{fp:?}");
        assert!((fp.points[0].location - 0.05 * eps).abs() <= 1e-12);
        assert_eq!(
            fp.stabilities(),
            vec![Stability::Repelling, Stability::Attracting, Stability::Repelling]
        );
        for p in &fp.points {
            assert!(residual(&f, p.location) <= 1e-12);
        }
    }

    #[test]
    fn doubling_has_only_origin() {
        let fp = fiber_fixed_points(&FiberMap::doubling(0.0));
        assert_eq!(fp.len(), 1);
        assert_eq!(fp.points[0].location, 0.0);
        assert_eq!(fp.points[0].stability, Stability::Repelling);
    }

    #[test]
    fn experimental_origin_is_neutral() {
        let fp = fiber_fixed_points(&FiberMap::experimental(0.0));
        assert!(fp
            .points
            .iter()
            .any(|p| p.location == 0.0 && p.stability == Stability::Neutral));
    }

    #[test]
    fn pair_collapses_onto_half_epsilon() {
        let eps = 0.01;
        let (mut last_minus, mut last_plus) = (f64::INFINITY, f64::INFINITY);
        for &a in &[-0.05, -0.02, -0.01, -0.005] {
            let fp = fiber_fixed_points(&FiberMap::intermittent(eps, a).unwrap());
            assert_eq!(fp.len(), 3);
            let d_minus = (fp.points[1].location - eps / 2.0).abs();
            let d_plus = (fp.points[2].location - eps / 2.0).abs();
            assert!(d_minus < last_minus && d_plus < last_plus, "a={a}");
            last_minus = d_minus;
            last_plus = d_plus;
        }
    }
}
