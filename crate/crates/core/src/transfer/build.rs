use std::f64::consts::PI;

use rayon::prelude::*;

use super::grid::UlamGrid;
use super::operator::{UlamOperator, UlamScheme};
use crate::error::{Error, Result};
use crate::maps::{wrap01, FiberMap, SkewSystem};
use crate::rng::{derive_seed, XorShift64Star};

pub const DEFAULT_CELLS_1D: usize = 1 << 12;
pub const DEFAULT_GRID_2D: usize = 256;
pub const DEFAULT_SAMPLES_PER_CELL: usize = 64;
pub const MIN_SAMPLES_1D: usize = 32;
pub const MIN_SAMPLES_2D: usize = 16;
/// Largest torus grid accepted, in cells.
pub const MAX_CELLS_2D: usize = 1 << 22;

fn even_ceil(k: usize) -> usize {
    k + (k & 1)
}

/// Stratified forward-sampling Ulam matrix of a circle map on `n` cells.
///
/// Each cell is cut into an even number `s ≥ samples_per_cell` of equal
/// strata with one jittered sample each; entry `(i, j)` is the fraction of
/// cell `j`'s samples landing in cell `i`.
pub fn ulam_1d(f: &FiberMap, n: usize, samples_per_cell: usize, seed: u64) -> Result<UlamOperator> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 cells, got {n}")));
    }
    if samples_per_cell < MIN_SAMPLES_1D {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SAMPLES_1D} samples per cell, got {samples_per_cell}"
        )));
    }
    let s = even_ceil(samples_per_cell);
    let grid = UlamGrid::Circle { n };
    let nf = n as f64;
    let columns: Vec<Vec<(u32, f64)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut rng = XorShift64Star::new(derive_seed(seed, j as u64));
            let w = 1.0 / s as f64;
            (0..s)
                .map(|k| {
                    let y = (j as f64 + (k as f64 + rng.next_f64()) / s as f64) / nf;
                    (grid.locate(0.0, f.eval(y)) as u32, w)
                })
                .collect()
        })
        .collect();
    Ok(UlamOperator::from_columns(grid, columns, UlamScheme::Sampled, s, seed))
}

/// Ulam matrix with exact entries `Leb(cell j ∩ f⁻¹ cell i) / Leb(cell j)`,
/// computed from preimages of cell boundaries.
pub fn ulam_1d_exact(f: &FiberMap, n: usize) -> Result<UlamOperator> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 cells, got {n}")));
    }
    let grid = UlamGrid::Circle { n };
    let columns = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut col = Vec::new();
            let (y0, y1) = (j as f64 / n as f64, (j + 1) as f64 / n as f64);
            fiber_overlaps(f, y0, y1, 0.0, n, 1.0, &mut col);
            col
        })
        .collect();
    Ok(UlamOperator::from_columns(grid, columns, UlamScheme::Exact, 0, 0))
}

fn check_2d(nx: usize, ny: usize, samples_per_cell: usize) -> Result<()> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidInput(format!("grid must be at least 2x2, got {nx}x{ny}")));
    }
    if nx.saturating_mul(ny) > MAX_CELLS_2D {
        return Err(Error::InvalidInput(format!(
            "grid {nx}x{ny} exceeds the {MAX_CELLS_2D}-cell budget"
        )));
    }
    if samples_per_cell < MIN_SAMPLES_2D {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SAMPLES_2D} samples per cell, got {samples_per_cell}"
        )));
    }
    Ok(())
}

/// Stratified forward-sampling Ulam matrix of a skew product on an
/// `nx × ny` torus grid.
///
/// The base direction of each cell is cut into `m` strata, each of which
/// `x ↦ m x` maps onto exactly one base cell; the fiber direction into an
/// even number of strata. The sample count is rounded up to `m · ky` with
/// `ky` even.
pub fn ulam_2d(
    system: &SkewSystem,
    nx: usize,
    ny: usize,
    samples_per_cell: usize,
    seed: u64,
) -> Result<UlamOperator> {
    check_2d(nx, ny, samples_per_cell)?;
    let m = system.m() as usize;
    let ky = even_ceil(samples_per_cell.div_ceil(m));
    let total = m * ky;
    let grid = UlamGrid::Torus { nx, ny };
    let w = 1.0 / total as f64;
    let columns = (0..nx * ny)
        .into_par_iter()
        .map(|j| {
            let (ix, iy) = ((j % nx) as f64, (j / nx) as f64);
            let mut rng = XorShift64Star::new(derive_seed(seed, j as u64));
            let mut col = Vec::with_capacity(total);
            for kx in 0..m {
                for l in 0..ky {
                    let x = (ix + (kx as f64 + rng.next_f64()) / m as f64) / nx as f64;
                    let y = (iy + (l as f64 + rng.next_f64()) / ky as f64) / ny as f64;
                    let xn = wrap01(m as f64 * x);
                    let yn = wrap01(system.fiber_image_lift(x, y));
                    col.push((grid.locate(xn, yn) as u32, w));
                }
            }
            col
        })
        .collect();
    Ok(UlamOperator::from_columns(grid, columns, UlamScheme::Sampled, total, seed))
}

/// Ulam matrix with the fiber direction integrated exactly.
///
/// Each cell's base interval is cut into `m · r` strata (`r` chosen so that
/// at least `samples_per_cell` strata are used) and each stratum is
/// represented by its midpoint `x`; the overlap of the image of the fiber
/// interval with every target cell is then computed from preimages of the
/// target boundaries. Entries depend continuously on the map, which makes
/// this scheme suited to finite differences in the parameter.
pub fn ulam_2d_fiber_exact(
    system: &SkewSystem,
    nx: usize,
    ny: usize,
    samples_per_cell: usize,
) -> Result<UlamOperator> {
    check_2d(nx, ny, samples_per_cell)?;
    let m = system.m() as usize;
    let kx = m * samples_per_cell.div_ceil(m);
    let grid = UlamGrid::Torus { nx, ny };
    let coupling = system.coupling();
    let fiber = system.fiber();
    let columns = (0..nx * ny)
        .into_par_iter()
        .map(|j| {
            let (ix, iy) = (j % nx, j / nx);
            let (y0, y1) = (iy as f64 / ny as f64, (iy + 1) as f64 / ny as f64);
            let mut col = Vec::new();
            let mut pieces = Vec::new();
            for k in 0..kx {
                let x = (ix as f64 + (k as f64 + 0.5) / kx as f64) / nx as f64;
                let col_x = ((m as f64 * x).fract() * nx as f64) as usize;
                let col_x = col_x.min(nx - 1);
                let c = coupling * (2.0 * PI * x).cos();
                pieces.clear();
                fiber_overlaps(fiber, y0, y1, c, ny, 1.0 / kx as f64, &mut pieces);
                col.extend(pieces.iter().map(|&(row, v)| (row * nx as u32 + col_x as u32, v)));
            }
            col
        })
        .collect();
    Ok(UlamOperator::from_columns(grid, columns, UlamScheme::FiberExact, kx, 0))
}

/// Splits `[y0, y1]` according to which of the `n` cells `L(y) + c` falls
/// in, appending `(cell, weight · fraction)` pairs.
fn fiber_overlaps(
    f: &FiberMap,
    y0: f64,
    y1: f64,
    c: f64,
    n: usize,
    weight: f64,
    out: &mut Vec<(u32, f64)>,
) {
    let nf = n as f64;
    let g = |y: f64| f.lift(y) + c;
    let (v0, v1) = (g(y0), g(y1));
    let len = y1 - y0;
    let mut k = (v0 * nf).floor();
    let mut left = y0;
    loop {
        let cell = (k as i64).rem_euclid(n as i64) as u32;
        let boundary = (k + 1.0) / nf;
        if boundary >= v1 {
            out.push((cell, weight * (y1 - left) / len));
            break;
        }
        let t = invert_monotone(f, c, boundary, left, y1);
        out.push((cell, weight * (t - left) / len));
        left = t;
        k += 1.0;
    }
}

/// Solves `L(y) + c = v` on `[lo, hi]` by safeguarded Newton.
fn invert_monotone(f: &FiberMap, c: f64, v: f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = |y: f64| f.lift(y) + c - v;
    let (glo, ghi) = (g(lo), g(hi));
    if glo >= 0.0 {
        return lo;
    }
    if ghi <= 0.0 {
        return hi;
    }
    let mut y = lo + (hi - lo) * (-glo) / (ghi - glo);
    for _ in 0..100 {
        let r = g(y);
        if r == 0.0 {
            return y;
        }
        if r < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let mut next = y - r / f.deriv(y);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() <= 1e-16 || hi - lo <= 1e-16 {
            return next;
        }
        y = next;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_four_cells_exact_columns() {
        let f = FiberMap::doubling(0.0);
        for op in [ulam_1d(&f, 4, 64, 1).unwrap(), ulam_1d_exact(&f, 4).unwrap()] {
            for j in 0..4 {
                let col: Vec<_> = op.column(j).collect();
                assert_eq!(col, vec![((2 * j) % 4, 0.5), ((2 * j) % 4 + 1, 0.5)], "{:?}", op.scheme());
            }
        }
    }

    #[test]
    fn columns_sum_to_one() {
        let f = FiberMap::experimental(0.01);
        for op in [ulam_1d(&f, 200, 33, 2).unwrap(), ulam_1d_exact(&f, 200).unwrap()] {
            assert_eq!(op.samples_per_cell() % 2, 0);
            for s in op.column_sums() {
                assert!((s - 1.0).abs() <= 1e-12);
            }
        }
        let sys = SkewSystem::experimental(0.01, 0.01, 7).unwrap();
        for op in [
            ulam_2d(&sys, 32, 32, 64, 3).unwrap(),
            ulam_2d_fiber_exact(&sys, 32, 32, 16).unwrap(),
        ] {
            for s in op.column_sums() {
                assert!((s - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sample_count_is_rounded_to_strata() {
        let sys = SkewSystem::experimental(0.0, 0.01, 7).unwrap();
        let op = ulam_2d(&sys, 8, 8, 64, 0).unwrap();
        assert_eq!(op.samples_per_cell(), 70);
        for j in 0..op.n() {
            assert!(op.column(j).count() <= 70);
        }
    }

    #[test]
    fn sampled_and_exact_agree_on_average() {
        let f = FiberMap::experimental(0.01);
        let a = ulam_1d(&f, 64, 4096, 5).unwrap().to_dense();
        let b = ulam_1d_exact(&f, 64).unwrap().to_dense();
        assert!((a - b).amax() < 2e-3);
    }

    #[test]
    fn rejects_bad_sizes() {
        let f = FiberMap::doubling(0.0);
        assert!(ulam_1d(&f, 1, 64, 0).is_err());
        assert!(ulam_1d(&f, 8, 31, 0).is_err());
        let sys = SkewSystem::experimental(0.0, 0.01, 7).unwrap();
        assert!(ulam_2d(&sys, 8, 8, 15, 0).is_err());
        assert!(ulam_2d(&sys, 4096, 4096, 64, 0).is_err());
    }

    #[test]
    fn builds_are_deterministic() {
        let sys = SkewSystem::experimental(-0.01, 0.01, 7).unwrap();
        let a = ulam_2d(&sys, 16, 16, 32, 11).unwrap().to_dense();
        let b = ulam_2d(&sys, 16, 16, 32, 11).unwrap().to_dense();
        assert_eq!(a, b);
    }
}
