use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::Family;
use crate::transfer::{integrate_observable, stationary_density, ulam_2d_fiber_exact, NEAR_CRITICAL_MAX_ITER};

pub const DEFAULT_SMOOTH_GRID: usize = 128;
pub const DEFAULT_SMOOTH_STRATA: usize = 64;
const STATIONARY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothGrid {
    pub nx: usize,
    pub ny: usize,
    /// Base strata per cell.
    pub strata: usize,
}

impl Default for SmoothGrid {
    fn default() -> Self {
        Self {
            nx: DEFAULT_SMOOTH_GRID,
            ny: DEFAULT_SMOOTH_GRID,
            strata: DEFAULT_SMOOTH_STRATA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothRow {
    pub h: f64,
    pub value_minus: f64,
    pub value_plus: f64,
    /// `(I(a + h) - I(a - h)) / 2h`.
    pub first_difference: f64,
    /// `(I(a + h) - 2 I(a) + I(a - h)) / h²`.
    pub second_difference: f64,
    /// Either stationary solve at `a ± h` hit its iteration cap.
    pub slow_mixing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessTable {
    pub a_center: f64,
    pub value: f64,
    pub slow_mixing: bool,
    pub rows: Vec<SmoothRow>,
}

impl SmoothnessTable {
    /// Largest relative change of the first difference between consecutive rows.
    pub fn max_relative_change(&self) -> f64 {
        self.rows
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].first_difference, w[1].first_difference);
                if a == b {
                    0.0
                } else {
                    (a - b).abs() / a.abs().max(b.abs())
                }
            })
            .fold(0.0, f64::max)
    }
}

/// `I(a) = ∫ ψ dμ_a` from the stationary density of the fiber-exact Ulam
/// matrix, plus the flag for a capped solve.
pub fn srb_integral(family: &Family, a: f64, psi: &(dyn Fn(f64, f64) -> f64 + Sync), grid: SmoothGrid) -> Result<(f64, bool)> {
    let op = ulam_2d_fiber_exact(&family.at(a)?, grid.nx, grid.ny, grid.strata)?;
    let report = stationary_density(&op, STATIONARY_TOL, NEAR_CRITICAL_MAX_ITER)?;
    Ok((integrate_observable(&report.stationary, op.grid(), psi), report.slow_mixing()))
}

/// Central first and second differences of `a ↦ ∫ ψ dμ_a` for each step in
/// `h_list`.
///
/// The matrices are built with exact fiber overlaps, so their entries move
/// continuously with `a` and the differences are not swamped by sampling
/// noise.
pub fn smoothness_diagnostic(
    family: &Family,
    a_center: f64,
    h_list: &[f64],
    psi: &(dyn Fn(f64, f64) -> f64 + Sync),
    grid: SmoothGrid,
) -> Result<SmoothnessTable> {
    if h_list.is_empty() || h_list.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::InvalidInput("steps must be a non-empty list of positive values".into()));
    }
    let h_max = h_list.iter().copied().fold(0.0, f64::max);
    let critical = -family.delta();
    if (a_center - critical).abs() < h_max {
        return Err(Error::Domain(format!(
            "a_center = {a_center} is within {h_max} of the fiberwise saddle-node at {critical}"
        )));
    }
    let mut points = vec![a_center];
    for &h in h_list {
        points.push(a_center - h);
        points.push(a_center + h);
    }
    let values = points
        .par_iter()
        .map(|&a| srb_integral(family, a, psi, grid))
        .collect::<Result<Vec<_>>>()?;
    let (i0, slow0) = values[0];
    let rows = h_list
        .iter()
        .enumerate()
        .map(|(k, &h)| {
            let (im, sm) = values[1 + 2 * k];
            let (ip, sp) = values[2 + 2 * k];
            SmoothRow {
                h,
                value_minus: im,
                value_plus: ip,
                first_difference: (ip - im) / (2.0 * h),
                second_difference: (ip - 2.0 * i0 + im) / (h * h),
                slow_mixing: sm || sp,
            }
        })
        .collect::<Vec<_>>();
    Ok(SmoothnessTable {
        a_center,
        value: i0,
        slow_mixing: slow0 || rows.iter().any(|r| r.slow_mixing),
        rows,
    })
}
