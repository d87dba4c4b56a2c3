use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{central_lyapunov, OrbitSpec};
use crate::error::{Error, Result};
use crate::maps::Family;
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub a: f64,
    pub chi_c: f64,
    pub n_iter: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    /// Sorted by strictly increasing `a`.
    pub records: Vec<SweepRecord>,
    pub family_id: String,
    pub step: f64,
}

impl SweepTable {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Indices `k` where `chi_c` changes sign between records `k` and `k + 1`.
    pub fn sign_changes(&self) -> Vec<usize> {
        self.records
            .windows(2)
            .enumerate()
            .filter(|(_, w)| (w[0].chi_c < 0.0) != (w[1].chi_c < 0.0))
            .map(|(k, _)| k)
            .collect()
    }
}

/// Seed of the orbit used at parameter `a`: a hash of the master seed and
/// the bits of `a`, so records do not depend on evaluation order.
pub fn seed_for(master: u64, a: f64) -> u64 {
    derive_seed(master, a.to_bits())
}

/// Grid `a_lo + k · step` up to and including `a_hi`.
pub fn parameter_grid(a_lo: f64, a_hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidInput(format!("sweep step must be positive, got {step}")));
    }
    if !(a_lo < a_hi) {
        return Err(Error::InvalidInput(format!("sweep needs a_lo < a_hi, got [{a_lo}, {a_hi}]")));
    }
    let count = ((a_hi - a_lo) / step + 1e-9).floor() as usize + 1;
    let mut grid: Vec<f64> = (0..count).map(|k| a_lo + k as f64 * step).collect();
    // snap the last point onto a_hi when the step divides the range
    let last = grid.last_mut().unwrap();
    if (*last - a_hi).abs() <= 1e-9 * step {
        *last = a_hi;
    }
    Ok(grid)
}

/// Central exponent on a parameter grid, one orbit per grid value, computed
/// in parallel. `spec.seed` is the master seed.
pub fn sweep(family: &Family, a_lo: f64, a_hi: f64, step: f64, spec: &OrbitSpec) -> Result<SweepTable> {
    let grid = parameter_grid(a_lo, a_hi, step)?;
    let records = grid
        .par_iter()
        .map(|&a| {
            let seed = seed_for(spec.seed, a);
            let est = central_lyapunov(&family.at(a)?, &spec.with_seed(seed))?;
            Ok(SweepRecord {
                a,
                chi_c: est.chi_c,
                n_iter: est.n_used,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        records,
        family_id: family.id(),
        step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_include_endpoints() {
        assert_eq!(parameter_grid(-0.02, 0.02, 1e-3).unwrap().len(), 41);
        assert_eq!(parameter_grid(-0.004, 0.004, 1e-4).unwrap().len(), 81);
        let g = parameter_grid(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.len(), 4);
        assert!(parameter_grid(0.0, 1.0, 0.0).is_err());
        assert!(parameter_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn sweep_is_deterministic_and_sorted() {
        let fam = Family::experimental_default();
        let spec = OrbitSpec::random(4).with_length(20_000);
        let a = sweep(&fam, -0.02, 0.02, 0.01, &spec).unwrap();
        let b = sweep(&fam, -0.02, 0.02, 0.01, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.records.windows(2).all(|w| w[0].a < w[1].a));
        assert!(a.records.iter().all(|r| r.chi_c.is_finite() && r.n_iter == 20_000));
        assert_eq!(a.records[1].seed, seed_for(4, a.records[1].a));
    }
}
