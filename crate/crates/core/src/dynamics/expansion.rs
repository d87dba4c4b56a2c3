use rayon::prelude::*;
use serde::Serialize;

use crate::maps::FiberMap;

/// Grid used to bound `|f''|` and `min f'` numerically.
const CURVATURE_GRID: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCertificate {
    pub certified: bool,
    /// Largest `n` needed over all certified cells.
    pub worst_n: u32,
    pub uncertified_cells: usize,
    pub grid_n: usize,
    pub n_max: u32,
    /// Numerical bound on `|f''|` used for padding.
    pub curvature_bound: f64,
}

/// Numerical bounds `(max |f''|, min f')` from difference quotients of `f'`
/// on a fine grid, inflated by 5% and by one grid step of curvature.
pub fn derivative_bounds(f: &FiberMap) -> (f64, f64) {
    let n = CURVATURE_GRID;
    let h = 1.0 / n as f64;
    let (k2, dmin) = (0..n)
        .into_par_iter()
        .map(|i| {
            let y = i as f64 * h;
            let d0 = f.deriv(y);
            let d1 = f.deriv(y + h);
            ((d1 - d0).abs() / h, d0.min(d1))
        })
        .reduce(|| (0.0, f64::INFINITY), |a, b| (a.0.max(b.0), a.1.min(b.1)));
    let k2 = 1.05 * k2 + 1e-9;
    (k2, (dmin - k2 * h).max(0.0))
}

/// For each of `grid_n` cells of the circle, finds the least `n ≤ n_max`
/// such that a lower bound of `(fⁿ)'` over the whole cell exceeds 1.
///
/// Each cell is pushed forward as an interval of the lift (exact, since the
/// lift is increasing) and `f'` on an interval of half-width `r` around `c`
/// is bounded below by `f'(c) - K r` with `K` the numerical `|f''|` bound,
/// so a certificate covers the cell and not just its sample point.
pub fn uniform_expansion_certificate(f: &FiberMap, n_max: u32, grid_n: usize) -> ExpansionCertificate {
    let (k2, global_min) = derivative_bounds(f);
    let grid = grid_n.max(1);
    let h = 1.0 / grid as f64;
    let results: Vec<Option<u32>> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let (mut lo, mut hi) = (i as f64 * h, (i + 1) as f64 * h);
            let mut log_prod = 0.0f64;
            for n in 1..=n_max {
                let width = hi - lo;
                let bound = if width >= 1.0 {
                    global_min
                } else {
                    (f.deriv(0.5 * (lo + hi)) - 0.5 * k2 * width).max(global_min)
                };
                if bound <= 0.0 {
                    log_prod = f64::NEG_INFINITY;
                } else {
                    log_prod += bound.ln();
                }
                if log_prod > 0.0 {
                    return Some(n);
                }
                let shift = lo.floor();
                let (nlo, nhi) = (f.lift(lo - shift), f.lift(hi - shift));
                lo = nlo;
                hi = nhi;
                let s = lo.floor();
                lo -= s;
                hi -= s;
            }
            None
        })
        .collect();
    let uncertified_cells = results.iter().filter(|r| r.is_none()).count();
    let worst_n = results.iter().flatten().copied().max().unwrap_or(0);
    ExpansionCertificate {
        certified: uncertified_cells == 0,
        worst_n,
        uncertified_cells,
        grid_n: grid,
        n_max,
        curvature_bound: k2,
    }
}

/// `min (fⁿ)'(y)` over the grid points `y = k / grid_n`.
pub fn min_iterate_derivative(f: &FiberMap, n: u32, grid_n: usize) -> f64 {
    (0..grid_n)
        .into_par_iter()
        .map(|k| {
            let mut y = k as f64 / grid_n as f64;
            let mut prod = 1.0;
            for _ in 0..n {
                prod *= f.deriv(y);
                y = f.eval(y);
            }
            prod
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_steps_suffice_at_a_one() {
        let f = FiberMap::intermittent(0.01, 1.0).unwrap();
        let cert = uniform_expansion_certificate(&f, 2, 100_000);
        assert!(cert.certified, "{cert:?}");
        assert!(cert.worst_n <= 2);
        assert!(min_iterate_derivative(&f, 2, 100_000) >= 4.0 / 3.0 - 1e-9);
    }

    #[test]
    fn small_positive_offset_certified() {
        let f = FiberMap::intermittent(0.01, 0.001).unwrap();
        let cert = uniform_expansion_certificate(&f, 10_000, 100_000);
        assert!(cert.certified, "{cert:?}");
        assert!(cert.worst_n > 2);
    }

    #[test]
    fn attracting_point_blocks_certificate() {
        let f = FiberMap::intermittent(0.01, -0.05).unwrap();
        let cert = uniform_expansion_certificate(&f, 1_000, 10_000);
        assert!(!cert.certified);
        assert!(cert.uncertified_cells > 0);
    }

    #[test]
    fn doubling_certified_in_one_step() {
        let cert = uniform_expansion_certificate(&FiberMap::doubling(0.3), 1, 1_000);
        assert!(cert.certified);
        assert_eq!(cert.worst_n, 1);
    }
}
