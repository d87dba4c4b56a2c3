use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{central_lyapunov, OrbitSpec};
use crate::error::{Error, Result};
use crate::maps::Family;
use crate::rng::derive_seed;

/// Independent orbits per parameter value; the sign is their median sign.
pub const SEEDS_PER_POINT: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignChange {
    pub a0_bracket: (f64, f64),
    pub iterations: usize,
    /// Median central exponent at the bracket ends.
    pub chi_at_lo: f64,
    pub chi_at_hi: f64,
    /// Midpoints where the seeds disagreed on the sign and were redrawn.
    pub noisy_midpoints: Vec<f64>,
}

impl SignChange {
    pub fn width(&self) -> f64 {
        self.a0_bracket.1 - self.a0_bracket.0
    }
}

fn median3(mut v: [f64; SEEDS_PER_POINT]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[1]
}

/// Three central exponents at `a`, seeded from `(master, a, round)`.
fn chi_samples(family: &Family, a: f64, spec: &OrbitSpec, round: u64) -> Result<[f64; SEEDS_PER_POINT]> {
    let system = family.at(a)?;
    let base = derive_seed(spec.seed, a.to_bits());
    let v: Vec<f64> = (0..SEEDS_PER_POINT as u64)
        .into_par_iter()
        .map(|k| {
            let seed = derive_seed(base, round * SEEDS_PER_POINT as u64 + k);
            central_lyapunov(&system, &spec.with_seed(seed)).map(|e| e.chi_c)
        })
        .collect::<Result<_>>()?;
    Ok([v[0], v[1], v[2]])
}

/// Median exponent at `a`. When the seeds disagree on the sign, three fresh
/// seeds are drawn once and their median is used instead.
fn median_chi(family: &Family, a: f64, spec: &OrbitSpec, noisy: &mut Vec<f64>) -> Result<f64> {
    let first = chi_samples(family, a, spec, 0)?;
    let negatives = first.iter().filter(|&&c| c < 0.0).count();
    if negatives == 0 || negatives == SEEDS_PER_POINT {
        return Ok(median3(first));
    }
    noisy.push(a);
    Ok(median3(chi_samples(family, a, spec, 1)?))
}

/// Bisection on `a` for the sign change of the central exponent.
///
/// Each evaluation uses fresh seeds derived from the master seed and the
/// parameter value. The bracket ends must have opposite median signs.
pub fn find_sign_change(
    family: &Family,
    bracket: (f64, f64),
    resolution: f64,
    spec: &OrbitSpec,
) -> Result<SignChange> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("bracket must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidInput(format!("resolution must be positive, got {resolution}")));
    }
    let mut noisy = Vec::new();
    let mut chi_lo = median_chi(family, lo, spec, &mut noisy)?;
    let mut chi_hi = median_chi(family, hi, spec, &mut noisy)?;
    if (chi_lo < 0.0) == (chi_hi < 0.0) {
        return Err(Error::NoBracket {
            lo,
            hi,
            chi_lo,
            chi_hi,
        });
    }
    let mut iterations = 0;
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let chi = median_chi(family, mid, spec, &mut noisy)?;
        if (chi < 0.0) == (chi_lo < 0.0) {
            lo = mid;
            chi_lo = chi;
        } else {
            hi = mid;
            chi_hi = chi;
        }
        iterations += 1;
    }
    Ok(SignChange {
        a0_bracket: (lo, hi),
        iterations,
        chi_at_lo: chi_lo,
        chi_at_hi: chi_hi,
        noisy_midpoints: noisy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_signs_are_rejected() {
        let fam = Family::experimental_default();
        let spec = OrbitSpec::random(1).with_length(100_000);
        let err = find_sign_change(&fam, (0.01, 0.02), 1e-3, &spec).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn bracket_is_valid_and_narrow() {
        let fam = Family::experimental_default();
        let spec = OrbitSpec::random(2).with_length(200_000);
        let sc = find_sign_change(&fam, (-0.02, 0.02), 1e-3, &spec).unwrap();
        assert!(sc.chi_at_lo < 0.0 && sc.chi_at_hi > 0.0);
        assert!(sc.width() <= 1e-3);
        assert!(sc.a0_bracket.0 > -0.01 && sc.a0_bracket.1 < 0.005, "{sc:?}");
    }

    #[test]
    fn invalid_arguments() {
        let fam = Family::experimental_default();
        let spec = OrbitSpec::random(1).with_length(1_000);
        assert!(matches!(find_sign_change(&fam, (0.1, 0.0), 1e-3, &spec), Err(Error::InvalidInput(_))));
        assert!(matches!(find_sign_change(&fam, (0.0, 0.1), 0.0, &spec), Err(Error::InvalidInput(_))));
    }
}
