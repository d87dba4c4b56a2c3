//! Horizontal cone field, image cones of preimage branches, and the
//! transversality count `m(F)`.
//!
//! A tangent vector `(v_x, v_y)` is in the cone when
//! `|v_y| ≤ c0 · coupling · |v_x|`. Cones are handled through their slope
//! intervals `v_y / v_x`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{SkewSystem, TorusPoint, PREIMAGE_TOL};

/// Relative margin by which image cones must sit inside the cone.
pub const CONE_MARGIN: f64 = 1e-3;
/// Returned when the coupling vanishes and any aperture works.
pub const C0_FLOOR: f64 = 1e-6;
/// Two slope intervals closer than this are treated as intersecting.
pub const GUARD: f64 = 1e-12;
pub const MIN_CONE_GRID: usize = 1_000;
pub const MIN_TRANSVERSALITY_GRID: usize = 64;
pub const DEFAULT_TRANSVERSALITY_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeParams {
    pub c0: f64,
    pub coupling: f64,
}

impl ConeParams {
    pub fn new(c0: f64, coupling: f64) -> Self {
        Self { c0, coupling }
    }

    pub fn for_system(system: &SkewSystem, c0: f64) -> Self {
        Self::new(c0, system.coupling())
    }

    /// Largest admissible `|v_y / v_x|`.
    pub fn half_width(&self) -> f64 {
        self.c0 * self.coupling.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SlopeInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// The transversality relation: the two closed intervals are separated
    /// by more than [`GUARD`].
    pub fn transversal(&self, other: &SlopeInterval) -> bool {
        other.lo > self.hi + GUARD || self.lo > other.hi + GUARD
    }
}

fn max_fiber_deriv(system: &SkewSystem, grid_n: usize) -> f64 {
    let f = system.fiber();
    (0..grid_n)
        .into_par_iter()
        .map(|k| f.deriv(k as f64 / grid_n as f64))
        .reduce(|| 0.0, f64::max)
}

fn min_fiber_deriv(system: &SkewSystem, grid_n: usize) -> f64 {
    let f = system.fiber();
    (0..grid_n)
        .into_par_iter()
        .map(|k| f.deriv(k as f64 / grid_n as f64))
        .reduce(|| f64::INFINITY, f64::min)
}

/// Smallest `c0` for which `DF` maps the cone into itself with relative
/// margin [`CONE_MARGIN`].
///
/// From the triangular Jacobian, a slope `s` maps to
/// `(-2π κ sin 2πx + f'(y) s) / m`, so invariance needs
/// `2π + c0 · max f' ≤ c0 · m (1 - margin)`; `max f'` is taken on a grid of
/// `grid_n` fiber points.
pub fn min_cone_constant(system: &SkewSystem, grid_n: usize) -> Result<f64> {
    if grid_n < MIN_CONE_GRID {
        return Err(Error::InvalidInput(format!(
            "cone grid must have at least {MIN_CONE_GRID} points, got {grid_n}"
        )));
    }
    if system.coupling() == 0.0 {
        return Ok(C0_FLOOR);
    }
    let fmax = max_fiber_deriv(system, grid_n);
    let denom = system.m() as f64 * (1.0 - CONE_MARGIN) - fmax;
    if denom <= 0.0 {
        return Err(Error::Domain(format!(
            "no invariant cone: m = {} does not dominate max f' = {fmax}",
            system.m()
        )));
    }
    Ok(2.0 * PI / denom)
}

/// Slope interval of `DF_q(C)`.
pub fn image_slope_interval(system: &SkewSystem, q: TorusPoint, cone: &ConeParams) -> SlopeInterval {
    let m = system.m() as f64;
    let center = -2.0 * PI * system.coupling() * (2.0 * PI * q.x()).sin() / m;
    let h = cone.half_width() * system.fiber().deriv(q.y()) / m;
    SlopeInterval::new(center - h, center + h)
}

/// Smallest relative gap `1 - max|image slope| / half_width` over a
/// `grid_n × grid_n` grid; positive when the cone is strictly invariant.
pub fn cone_invariance_margin(system: &SkewSystem, cone: &ConeParams, grid_n: usize) -> f64 {
    let w = cone.half_width();
    (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 + 0.5) / grid_n as f64;
            (0..grid_n)
                .map(|j| {
                    let y = (j as f64 + 0.5) / grid_n as f64;
                    let s = image_slope_interval(system, TorusPoint::new(x, y), cone);
                    1.0 - s.lo.abs().max(s.hi.abs()) / w
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransversalityReport {
    /// `max_count / ((2/3) m)`.
    pub value: f64,
    /// `max_count / (m · min f')` with `min f'` measured on the fiber grid.
    pub det_floor_value: f64,
    /// Largest number of preimages transversal to a single preimage.
    pub max_count: usize,
    /// The same count on the doubled grid.
    pub refined_count: usize,
    /// Largest number of other preimages whose image cones meet that of a
    /// given preimage, on the same grid.
    pub max_overlap_count: usize,
    /// `max_overlap_count / ((2/3) m)`.
    pub overlap_value: f64,
    pub det_floor: f64,
    pub m: u32,
    pub grid_n: usize,
}

impl TransversalityReport {
    /// Doubling the grid moved the count by at most one.
    pub fn stable(&self) -> bool {
        self.max_count.abs_diff(self.refined_count) <= 1
    }
}

/// `(transversal, overlapping)` maxima over the grid and the preimages.
fn max_counts(system: &SkewSystem, cone: &ConeParams, grid_n: usize) -> Result<(usize, usize)> {
    (0..grid_n * grid_n)
        .into_par_iter()
        .map(|k| {
            let p = TorusPoint::new(
                ((k % grid_n) as f64 + 0.5) / grid_n as f64,
                ((k / grid_n) as f64 + 0.5) / grid_n as f64,
            );
            let cones: Vec<SlopeInterval> = system
                .preimages(p, PREIMAGE_TOL)?
                .into_iter()
                .map(|q| image_slope_interval(system, q, cone))
                .collect();
            let mut best = (0, 0);
            for a in &cones {
                let t = cones.iter().filter(|b| a.transversal(b)).count();
                best = (best.0.max(t), best.1.max(cones.len() - 1 - t));
            }
            Ok(best)
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))
}

/// `m(F)`: the largest number of preimages of a point whose image cones are
/// transversal to that of a given preimage, normalised by `(2/3) m`.
///
/// The supremum over points is taken on a `grid_n × grid_n` grid of cell
/// centres, so it is a lower bound for the true supremum. The count is
/// repeated on the doubled grid to report its stability.
///
/// The complementary count, preimages whose image cones meet the given one,
/// is reported alongside. Centres and widths of the image cones both scale
/// like `1/m`, so the transversal count grows in proportion to `m` while
/// the overlapping count stays bounded.
pub fn transversality_measure(
    system: &SkewSystem,
    cone: &ConeParams,
    grid_n: usize,
) -> Result<TransversalityReport> {
    if grid_n < MIN_TRANSVERSALITY_GRID {
        return Err(Error::InvalidInput(format!(
            "transversality grid must be at least {MIN_TRANSVERSALITY_GRID} per axis, got {grid_n}"
        )));
    }
    let (max_count, max_overlap_count) = max_counts(system, cone, grid_n)?;
    let refined_count = max_counts(system, cone, 2 * grid_n)?.0;
    let m = system.m() as f64;
    let det_floor = m * min_fiber_deriv(system, 100_000);
    Ok(TransversalityReport {
        value: max_count as f64 / (2.0 / 3.0 * m),
        det_floor_value: max_count as f64 / det_floor,
        max_count,
        refined_count,
        max_overlap_count,
        overlap_value: max_overlap_count as f64 / (2.0 / 3.0 * m),
        det_floor,
        m: system.m(),
        grid_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::FiberMap;
    use proptest::prelude::*;

    #[test]
    fn theoretical_cone_constant_near_closed_form() {
        let sys = SkewSystem::theoretical(0.01, 0.0, 0.01, 7).unwrap();
        let c0 = min_cone_constant(&sys, 100_000).unwrap();
        // the measured max f' sits below the a priori bound 10/3
        assert!(c0 <= 2.0 * PI / (7.0 - 10.0 / 3.0), "{c0}");
        assert!(c0 > 2.0 * PI / 7.0);
        let cone = ConeParams::for_system(&sys, c0);
        assert!(cone_invariance_margin(&sys, &cone, 1_000) > 0.0);
    }

    #[test]
    fn cone_constant_decreases_with_m() {
        let mut last = f64::INFINITY;
        for m in [5, 7, 17, 37, 77] {
            let sys = SkewSystem::experimental(0.0, 0.01, m).unwrap();
            let c0 = min_cone_constant(&sys, 10_000).unwrap();
            assert!(c0 < last);
            last = c0;
        }
    }

    #[test]
    fn small_base_multiplier_is_infeasible() {
        let sys = SkewSystem::theoretical(0.01, 0.0, 0.01, 3).unwrap();
        assert!(matches!(min_cone_constant(&sys, 1_000), Err(Error::Domain(_))));
        assert!(min_cone_constant(&sys, 999).is_err());
    }

    #[test]
    fn zero_coupling_floor_and_no_transversality() {
        let sys = SkewSystem::new(7, FiberMap::doubling(0.0), 0.0).unwrap();
        assert_eq!(min_cone_constant(&sys, 1_000).unwrap(), C0_FLOOR);
        let cone = ConeParams::for_system(&sys, 1.0);
        let r = transversality_measure(&sys, &cone, 64).unwrap();
        assert_eq!(r.max_count, 0);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.max_overlap_count, 13);
    }

    #[test]
    fn interval_formula_cases() {
        let sys = SkewSystem::new(7, FiberMap::doubling(0.0), 0.01).unwrap();
        let cone = ConeParams::new(1.5, 0.01);
        let s = image_slope_interval(&sys, TorusPoint::new(0.0, 0.3), &cone);
        assert_eq!(s.center(), 0.0);
        assert!((s.half_width() - 2.0 * 1.5 * 0.01 / 7.0).abs() < 1e-16);
        let s = image_slope_interval(&sys, TorusPoint::new(0.25, 0.3), &cone);
        assert!((s.center() + 2.0 * PI * 0.01 / 7.0).abs() < 1e-16);
    }

    #[test]
    fn separated_branches_are_transversal() {
        let sys = SkewSystem::experimental(0.0, 0.01, 7).unwrap();
        let c0 = min_cone_constant(&sys, 10_000).unwrap();
        let cone = ConeParams::for_system(&sys, c0);
        let pre = sys.preimages(TorusPoint::new(0.75, 0.5), PREIMAGE_TOL).unwrap();
        // base angles near 1/4 and 3/4 give opposite slope centres
        let q1 = pre.iter().find(|q| (q.x() - 0.25).abs() < 0.08).unwrap();
        let q2 = pre.iter().find(|q| (q.x() - 0.75).abs() < 0.08).unwrap();
        let (a, b) = (image_slope_interval(&sys, *q1, &cone), image_slope_interval(&sys, *q2, &cone));
        assert!(a.transversal(&b));
    }

    #[test]
    fn experimental_baseline_is_finite() {
        let sys = SkewSystem::experimental(0.0, 0.01, 7).unwrap();
        let cone = ConeParams::for_system(&sys, min_cone_constant(&sys, 10_000).unwrap());
        let r = transversality_measure(&sys, &cone, 64).unwrap();
        assert!(r.value > 0.0 && r.value <= 3.0, "{r:?}");
        assert!(r.stable());
    }

    proptest! {
        #[test]
        fn relation_is_symmetric_and_irreflexive(
            a in -1.0f64..1.0, wa in 0.0f64..0.5, b in -1.0f64..1.0, wb in 0.0f64..0.5,
        ) {
            let s = SlopeInterval::new(a - wa, a + wa);
            let t = SlopeInterval::new(b - wb, b + wb);
            prop_assert_eq!(s.transversal(&t), t.transversal(&s));
            prop_assert!(!s.transversal(&s));
        }

        #[test]
        fn cone_is_invariant_at_random_points(x in 0.0f64..1.0, y in 0.0f64..1.0, a in -0.02f64..0.02) {
            let sys = SkewSystem::experimental(a, 0.01, 7).unwrap();
            let cone = ConeParams::for_system(&sys, min_cone_constant(&sys, 10_000).unwrap());
            let s = image_slope_interval(&sys, TorusPoint::new(x, y), &cone);
            prop_assert!(s.lo > -cone.half_width() && s.hi < cone.half_width());
        }
    }
}
