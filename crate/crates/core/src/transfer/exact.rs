use super::grid::UlamGrid;
use crate::error::Result;
use crate::maps::{SkewSystem, TorusPoint, PREIMAGE_TOL};

/// `(P u)(p) = Σ_{F(q) = p} u(q) / |det DF(q)|`, summed over the `2m`
/// preimages.
pub fn pf_apply_exact(system: &SkewSystem, u: impl Fn(f64, f64) -> f64, p: TorusPoint) -> Result<f64> {
    let mut total = 0.0;
    for q in system.preimages(p, PREIMAGE_TOL)? {
        total += u(q.x(), q.y()) / system.jacobian(q).det().abs();
    }
    Ok(total)
}

/// `Σ_j p_j ψ(centre_j)`. Circle grids pass `x = 0`.
pub fn integrate_observable(stationary: &[f64], grid: UlamGrid, psi: impl Fn(f64, f64) -> f64) -> f64 {
    stationary
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            let (x, y) = grid.center(j);
            p * psi(x, y)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::maps::FiberMap;

    #[test]
    fn lebesgue_is_fixed_by_doubling_skew() {
        let sys = SkewSystem::new(7, FiberMap::doubling(0.0), 0.0).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.3, 0.7), (0.99, 0.01)] {
            let v = pf_apply_exact(&sys, |_, _| 1.0, TorusPoint::new(x, y)).unwrap();
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_function_maps_to_zero() {
        let sys = SkewSystem::experimental(0.01, 0.01, 7).unwrap();
        assert_eq!(pf_apply_exact(&sys, |_, _| 0.0, TorusPoint::new(0.2, 0.4)).unwrap(), 0.0);
    }

    #[test]
    fn uniform_observable_integrals() {
        let g = UlamGrid::Torus { nx: 16, ny: 8 };
        let p = vec![1.0 / 128.0; 128];
        assert!((integrate_observable(&p, g, |_, _| 1.0) - 1.0).abs() < 1e-15);
        assert!(integrate_observable(&p, g, |x, _| (2.0 * PI * x).sin()).abs() < 1e-15);
    }
}
