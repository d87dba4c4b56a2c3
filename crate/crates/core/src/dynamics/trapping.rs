use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{Family, FiberMap};

pub const MIN_TRAP_GRID: usize = 1_000;

/// Outcome of checking `F_a(W) ⊂ W` for the strip `W = 𝕋 × ((δ - a)ε, ε/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapReport {
    pub holds: bool,
    /// Smallest distance from a sampled image to the complement of the strip.
    pub worst_margin: f64,
    pub y_lower: f64,
    pub y_upper: f64,
    /// `f_{ε,a-δ}(y₋) - y₋`, zero when the lower edge is the fixed point of the
    /// most downward-pushed fiber.
    pub lower_edge_residual: f64,
    /// `f_{ε,a+δ}(y₊) - y₊`, non-positive when the upper edge is pushed inwards.
    pub upper_edge_excess: f64,
    pub samples: u64,
}

/// Samples an `grid_n × grid_n` cell-centred grid of `W` and checks that
/// every image lands strictly inside the strip.
///
/// Only defined for the theoretical family with `a + δ ≤ 0`.
pub fn check_trapping(family: &Family, a: f64, grid_n: usize) -> Result<TrapReport> {
    let Family::Theoretical { epsilon, delta, .. } = *family else {
        return Err(Error::Domain("trapping strip is defined for the theoretical family only".into()));
    };
    if a + delta > 0.0 {
        return Err(Error::Domain(format!(
            "trapping requires a + delta <= 0, got a = {a}, delta = {delta}"
        )));
    }
    if grid_n < MIN_TRAP_GRID {
        return Err(Error::InvalidInput(format!(
            "trapping grid must be at least {MIN_TRAP_GRID} per axis, got {grid_n}"
        )));
    }
    let system = family.at(a)?;
    let y_lower = (delta - a) * epsilon;
    let y_upper = epsilon / 2.0;
    let coupling = system.coupling();
    let fiber = system.fiber();
    let n = grid_n as f64;

    let worst_margin = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 + 0.5) / n;
            let c = coupling * (2.0 * PI * x).cos();
            (0..grid_n)
                .map(|j| {
                    let y = y_lower + (j as f64 + 0.5) / n * (y_upper - y_lower);
                    let image = fiber.lift(y) + c;
                    (image - y_lower).min(y_upper - image)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);

    let low = FiberMap::intermittent(epsilon, a - delta)?;
    let high = FiberMap::intermittent(epsilon, a + delta)?;
    Ok(TrapReport {
        holds: worst_margin > 0.0,
        worst_margin,
        y_lower,
        y_upper,
        lower_edge_residual: low.lift(y_lower) - y_lower,
        upper_edge_excess: high.lift(y_upper) - y_upper,
        samples: (grid_n * grid_n) as u64,
    })
}
