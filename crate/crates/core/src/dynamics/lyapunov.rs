use serde::Serialize;

use super::orbit::{iterate, OrbitSpec};
use crate::error::{Error, Result};
use crate::maps::{SkewSystem, TorusPoint};
use crate::sum::NeumaierSum;

pub const MIN_LYAPUNOV_LENGTH: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    /// Central (vertical) exponent, nats per iterate.
    pub chi_c: f64,
    /// Horizontal exponent, always `ln m`.
    pub chi_u: f64,
    pub n_used: u64,
    pub initial_used: TorusPoint,
}

/// Birkhoff average of `ln f'(y_k)` along the orbit.
///
/// The Jacobian is lower triangular, so the vertical exponent is the scalar
/// average of its lower-right entry and the horizontal one is exactly `ln m`.
pub fn central_lyapunov(system: &SkewSystem, spec: &OrbitSpec) -> Result<LyapunovEstimate> {
    if spec.length < MIN_LYAPUNOV_LENGTH {
        return Err(Error::InvalidInput(format!(
            "Lyapunov estimate needs at least {MIN_LYAPUNOV_LENGTH} iterates, got {}",
            spec.length
        )));
    }
    let fiber = system.fiber();
    let sum: NeumaierSum = iterate(system, spec).map(|p| fiber.deriv(p.y()).ln()).collect();
    Ok(LyapunovEstimate {
        chi_c: sum.sum() / spec.length as f64,
        chi_u: (system.m() as f64).ln(),
        n_used: spec.length,
        initial_used: spec.initial_point(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::FiberMap;

    #[test]
    fn doubling_fiber_gives_log_two() {
        let f = SkewSystem::new(7, FiberMap::doubling(0.0), 0.0).unwrap();
        let est = central_lyapunov(&f, &OrbitSpec::random(1).with_length(10_000)).unwrap();
        assert!((est.chi_c - 2f64.ln()).abs() < 1e-14);
        assert_eq!(est.chi_u, 7f64.ln());
    }

    #[test]
    fn short_orbits_rejected() {
        let f = SkewSystem::experimental(0.0, 0.01, 7).unwrap();
        assert!(central_lyapunov(&f, &OrbitSpec::random(1).with_length(10)).is_err());
    }

    #[test]
    fn sign_at_sweep_ends() {
        let spec = OrbitSpec::random(5);
        let pos = central_lyapunov(&SkewSystem::experimental(0.02, 0.01, 7).unwrap(), &spec).unwrap();
        let neg = central_lyapunov(&SkewSystem::experimental(-0.02, 0.01, 7).unwrap(), &spec).unwrap();
        assert!(pos.chi_c > 0.0, "{}", pos.chi_c);
        assert!(neg.chi_c < 0.0, "{}", neg.chi_c);
        assert!(pos.chi_c < pos.chi_u);
    }

    #[test]
    fn bit_identical_reruns() {
        let f = SkewSystem::experimental(-0.0005, 0.01, 7).unwrap();
        let spec = OrbitSpec::random(77).with_length(50_000);
        let a = central_lyapunov(&f, &spec).unwrap();
        let b = central_lyapunov(&f, &spec).unwrap();
        assert_eq!(a.chi_c.to_bits(), b.chi_c.to_bits());
    }
}
