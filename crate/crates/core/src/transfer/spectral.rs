use nalgebra::{DMatrix, Schur};
use rayon::prelude::*;
use serde::Serialize;

use super::operator::UlamOperator;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, XorShift64Star};

/// Stationary power iteration stops at this cap near the saddle-node.
pub const NEAR_CRITICAL_MAX_ITER: usize = 100_000;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 20_000;
/// Largest operator the dense eigensolve will accept.
pub const DENSE_LIMIT: usize = 4096;

const BLOCK: usize = 8;
const RITZ_EVERY: usize = 10;
const RITZ_TOL: f64 = 1e-7;
const SUBLEADING_MAX_ITER: usize = 3_000;
const SUBLEADING_SEED: u64 = 0x5ab1e;
const SCHUR_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub leading: f64,
    pub subleading_modulus: f64,
    /// Cell probabilities, summing to 1.
    #[serde(skip)]
    pub stationary: Vec<f64>,
    pub iterations: usize,
    /// `max |M p - p|` for the returned `p`.
    pub residual: f64,
    pub converged: bool,
    pub subleading_iterations: usize,
    pub subleading_converged: bool,
}

impl SpectralReport {
    /// Set when the stationary iteration hit its cap; the gap is then
    /// too small to resolve at the requested tolerance.
    pub fn slow_mixing(&self) -> bool {
        !self.converged
    }

    pub fn gap(&self) -> f64 {
        1.0 - self.subleading_modulus
    }
}

/// Stationary density by power iteration from the uniform vector, plus the
/// subleading eigenvalue modulus.
///
/// Non-convergence is not an error: the report carries `converged = false`
/// and the final residual.
pub fn stationary_density(op: &UlamOperator, tol: f64, max_iter: usize) -> Result<SpectralReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let n = op.n();
    let mut p = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        op.apply_into(&p, &mut next);
        iterations += 1;
        converged = max_diff(&next, &p) <= tol;
        normalize_sum(&mut next);
        std::mem::swap(&mut p, &mut next);
        if converged {
            break;
        }
    }
    op.apply_into(&p, &mut next);
    let residual = max_diff(&next, &p);
    let leading = next.iter().sum::<f64>() / p.iter().sum::<f64>();
    let sub = subleading_modulus(op, SUBLEADING_MAX_ITER);
    Ok(SpectralReport {
        leading,
        subleading_modulus: sub.modulus,
        stationary: p,
        iterations,
        residual,
        converged,
        subleading_iterations: sub.iterations,
        subleading_converged: sub.converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubleadingEstimate {
    pub modulus: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Largest eigenvalue modulus of `M` on the sum-zero subspace.
///
/// Column stochasticity makes the sum-zero vectors invariant, so that
/// subspace carries every eigenvalue except the leading 1. A block of
/// orthonormal sum-zero vectors is iterated and the Ritz values of the
/// projected matrix read off every few steps; complex pairs, common for
/// these operators, are captured by the block where a single vector would
/// oscillate.
pub fn subleading_modulus(op: &UlamOperator, max_iter: usize) -> SubleadingEstimate {
    let n = op.n();
    if n < 2 {
        return SubleadingEstimate {
            modulus: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let b = BLOCK.min(n - 1);
    let mut rng = XorShift64Star::new(derive_seed(SUBLEADING_SEED, n as u64));
    let mut q: Vec<Vec<f64>> = (0..b).map(|_| random_sum_zero(&mut rng, n)).collect();
    orthonormalize(&mut q, &mut rng);

    let mut last = f64::NAN;
    let mut stable = 0;
    let mut modulus = 0.0;
    let mut iterations = 0;
    while iterations < max_iter {
        let mut z: Vec<Vec<f64>> = q.par_iter().map(|v| op.apply(v)).collect();
        iterations += 1;
        for v in &mut z {
            remove_mean(v);
        }
        if iterations % RITZ_EVERY == 1 || b == n - 1 {
            let h = DMatrix::from_fn(b, b, |i, j| dot(&q[i], &z[j]));
            let Some(moduli) = eigen_moduli(h) else {
                stable = 0;
                last = f64::NAN;
                q = z;
                orthonormalize(&mut q, &mut rng);
                continue;
            };
            modulus = moduli.into_iter().fold(0.0, f64::max);
            if (modulus - last).abs() <= RITZ_TOL {
                stable += 1;
            } else {
                stable = 0;
            }
            last = modulus;
            // the block spans the whole subspace: Ritz values are exact
            if b == n - 1 || stable >= 2 {
                return SubleadingEstimate {
                    modulus,
                    iterations,
                    converged: true,
                };
            }
        }
        q = z;
        orthonormalize(&mut q, &mut rng);
    }
    SubleadingEstimate {
        modulus,
        iterations,
        converged: false,
    }
}

/// Eigenvalue moduli of the dense matrix, descending. Oracle for small grids.
pub fn dense_spectrum(op: &UlamOperator) -> Result<Vec<f64>> {
    if op.n() > DENSE_LIMIT {
        return Err(Error::InvalidInput(format!(
            "dense eigensolve limited to {DENSE_LIMIT} cells, got {}",
            op.n()
        )));
    }
    let mut moduli = eigen_moduli(op.to_dense()).ok_or(Error::EigenSolve(op.n()))?;
    moduli.sort_by(|a, b| b.total_cmp(a));
    Ok(moduli)
}

/// Eigenvalue moduli via a bounded real Schur decomposition.
///
/// The QR sweep deflates on a test relative to the diagonal, which can stall
/// on nilpotent-like blocks; those retry on `A + cI` and shift back.
fn eigen_moduli(a: DMatrix<f64>) -> Option<Vec<f64>> {
    let n = a.nrows();
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    for shift in [0.0, 0.5 * scale, 1.37 * scale] {
        let shifted = &a + DMatrix::identity(n, n) * shift;
        if let Some(schur) = Schur::try_new(shifted, f64::EPSILON, SCHUR_MAX_ITER) {
            return Some(schur.complex_eigenvalues().iter().map(|c| (c.re - shift).hypot(c.im)).collect());
        }
    }
    None
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn normalize_sum(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn random_sum_zero(rng: &mut XorShift64Star, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
    remove_mean(&mut v);
    v
}

/// Modified Gram-Schmidt, twice. Columns that collapse (the operator can
/// annihilate directions) are replaced by fresh random sum-zero vectors.
fn orthonormalize(q: &mut [Vec<f64>], rng: &mut XorShift64Star) {
    let n = q[0].len();
    for k in 0..q.len() {
        let mut attempts = 0;
        loop {
            let scale = dot(&q[k], &q[k]).sqrt();
            for _ in 0..2 {
                for i in 0..k {
                    let (head, tail) = q.split_at_mut(k);
                    let c = dot(&head[i], &tail[0]);
                    tail[0].iter_mut().zip(&head[i]).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = dot(&q[k], &q[k]).sqrt();
            if norm > 1e-10 * scale && norm > 1e-300 {
                q[k].iter_mut().for_each(|x| *x /= norm);
                break;
            }
            attempts += 1;
            assert!(attempts < 100, "cannot complete an orthonormal block");
            q[k] = random_sum_zero(rng, n);
        }
    }
}
