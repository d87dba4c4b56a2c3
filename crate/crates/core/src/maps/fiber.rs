use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::bump::BumpProfile;
use super::torus::wrap01;
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Which circle endomorphism the fiber map is.
#[derive(Debug, Clone)]
pub enum FiberKind {
    /// `y ↦ 2y + a`.
    Doubling,
    /// The doubling map with a neutral fixed point carved in at `ε/2`:
    /// `y ↦ 2y - ε φ(y/ε) + a ε`.
    Intermittent {
        epsilon: f64,
        bump: Arc<BumpProfile>,
    },
    /// Closed-form intermittent map `y ↦ 2y - (sin 2πy + cos 2πy - 1)/(2π) + a`,
    /// neutral at `0`.
    Experimental,
}

/// A degree-2 circle endomorphism, evaluated through its lift.
///
/// The lift `L` satisfies `L(y + 1) = L(y) + 2` and is strictly increasing.
/// `offset` is the signed parameter `a`; for the intermittent kind the
/// additive shift is `a ε`, otherwise it is `a` itself.
#[derive(Debug, Clone)]
pub struct FiberMap {
    kind: FiberKind,
    offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberKindTag {
    Doubling,
    Intermittent,
    Experimental,
}

impl FiberMap {
    pub fn doubling(offset: f64) -> Self {
        Self {
            kind: FiberKind::Doubling,
            offset,
        }
    }

    /// `f_{ε,a}` with the shared tuned bump. Requires `0 < ε ≤ 1/100`.
    pub fn intermittent(epsilon: f64, a: f64) -> Result<Self> {
        Self::intermittent_with(epsilon, a, BumpProfile::standard()?)
    }

    pub fn intermittent_with(epsilon: f64, a: f64, bump: Arc<BumpProfile>) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.01) {
            return Err(Error::Domain(format!(
                "intermittent map needs 0 < epsilon <= 1/100, got {epsilon}"
            )));
        }
        if !a.is_finite() {
            return Err(Error::InvalidInput(format!("offset a must be finite, got {a}")));
        }
        Ok(Self {
            kind: FiberKind::Intermittent { epsilon, bump },
            offset: a,
        })
    }

    pub fn experimental(a: f64) -> Self {
        Self {
            kind: FiberKind::Experimental,
            offset: a,
        }
    }

    pub fn kind(&self) -> &FiberKind {
        &self.kind
    }

    pub fn tag(&self) -> FiberKindTag {
        match self.kind {
            FiberKind::Doubling => FiberKindTag::Doubling,
            FiberKind::Intermittent { .. } => FiberKindTag::Intermittent,
            FiberKind::Experimental => FiberKindTag::Experimental,
        }
    }

    /// The signed parameter `a`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn epsilon(&self) -> Option<f64> {
        match self.kind {
            FiberKind::Intermittent { epsilon, .. } => Some(epsilon),
            _ => None,
        }
    }

    /// Same map with a different offset `a`.
    pub fn with_offset(&self, a: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            offset: a,
        }
    }

    /// The additive constant actually added to the lift.
    pub fn shift(&self) -> f64 {
        match self.kind {
            FiberKind::Intermittent { epsilon, .. } => self.offset * epsilon,
            _ => self.offset,
        }
    }

    /// Lift restricted to the fundamental domain, `y ∈ [0, 1)`.
    #[inline]
    fn lift_unit(&self, y: f64) -> f64 {
        match &self.kind {
            FiberKind::Doubling => 2.0 * y + self.offset,
            FiberKind::Intermittent { epsilon, bump } => {
                2.0 * y - epsilon * bump.value(y / epsilon) + self.offset * epsilon
            }
            FiberKind::Experimental => {
                let (s, c) = (TWO_PI * y).sin_cos();
                2.0 * y - (s + c - 1.0) / TWO_PI + self.offset
            }
        }
    }

    /// The lift `L: ℝ → ℝ`, with `L(y + 1) = L(y) + 2`.
    #[inline]
    pub fn lift(&self, y: f64) -> f64 {
        let k = y.floor();
        let r = y - k;
        if r >= 1.0 {
            self.lift_unit(0.0) + 2.0 * (k + 1.0)
        } else {
            self.lift_unit(r) + 2.0 * k
        }
    }

    /// `f(y)` reduced to `[0, 1)`.
    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        wrap01(self.lift_unit(wrap01(y)))
    }

    /// `f'(y)`, strictly positive.
    #[inline]
    pub fn deriv(&self, y: f64) -> f64 {
        let y = wrap01(y);
        match &self.kind {
            FiberKind::Doubling => 2.0,
            FiberKind::Intermittent { epsilon, bump } => 2.0 - bump.derivative(y / epsilon),
            FiberKind::Experimental => {
                let (s, c) = (TWO_PI * y).sin_cos();
                2.0 - c + s
            }
        }
    }

    /// Solves `L(y) = v` for `y ∈ [0, 1)` by Newton steps safeguarded with
    /// bisection. `v` must lie in `[L(0), L(0) + 2)`.
    pub fn lift_inverse(&self, v: f64, tol: f64) -> Result<f64> {
        let l0 = self.lift_unit(0.0);
        if !(v >= l0 && v < l0 + 2.0) {
            return Err(Error::RootBracket {
                target: v,
                lo: l0,
                hi: l0 + 2.0,
            });
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut y = (v - l0) / 2.0;
        for _ in 0..200 {
            let r = self.lift_unit(y) - v;
            if r == 0.0 {
                return Ok(y);
            }
            if r < 0.0 {
                lo = y;
            } else {
                hi = y;
            }
            let mut next = y - r / self.deriv(y);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = (next - y).abs();
            y = next;
            if step <= 0.25 * tol || hi - lo <= tol {
                break;
            }
        }
        Ok(y)
    }

    /// The two points `y ∈ [0, 1)` with `f(y) = target (mod 1)`, one on each
    /// monotone branch, ascending.
    pub fn preimages(&self, target: f64, tol: f64) -> Result<[f64; 2]> {
        let l0 = self.lift_unit(0.0);
        let v = l0 + wrap01(target - l0);
        let lo = self.lift_inverse(v, tol)?;
        let hi = self.lift_inverse(v + 1.0, tol)?;
        if lo > hi {
            return Err(Error::RootBracket {
                target,
                lo,
                hi,
            });
        }
        Ok([lo, hi])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn intermittent_neutral_point_is_fixed() {
        let f = FiberMap::intermittent(0.01, 0.0).unwrap();
        assert!((f.eval(0.005) - 0.005).abs() < 1e-12);
        assert!((f.deriv(0.005) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn intermittent_is_shifted_doubling_off_window() {
        let f = FiberMap::intermittent(0.01, 0.3).unwrap();
        for &y in &[0.0105, 0.2, 0.5, 0.75, 0.999] {
            assert_eq!(f.eval(y), wrap01(2.0 * y + 0.3 * 0.01));
            assert_eq!(f.deriv(y), 2.0);
        }
    }

    #[test]
    fn experimental_values() {
        let f = FiberMap::experimental(0.0);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.deriv(0.0), 1.0);
        assert!((f.eval(0.5) - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn doubling_derivative() {
        let f = FiberMap::doubling(0.0);
        assert_eq!(f.deriv(0.123), 2.0);
        assert_eq!(f.eval(0.75), 0.5);
    }

    #[test]
    fn intermittent_rejects_large_epsilon() {
        assert!(FiberMap::intermittent(0.02, 0.0).is_err());
        assert!(FiberMap::intermittent(0.01, 0.0).is_ok());
        assert!(FiberMap::intermittent(0.0, 0.0).is_err());
    }

    #[test]
    fn derivative_box_for_intermittent() {
        for &a in &[-2.0, -1.0, 0.0, 1.0, 2.0] {
            let f = FiberMap::intermittent(0.01, a).unwrap();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for k in 0..100_000 {
                let d = f.deriv(k as f64 / 100_000.0);
                lo = lo.min(d);
                hi = hi.max(d);
            }
            assert!(lo >= 2.0 / 3.0 && hi <= 10.0 / 3.0, "a={a}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn corrupted_target_fails_to_bracket() {
        let f = FiberMap::experimental(0.0);
        assert!(matches!(f.lift_inverse(5.0, 1e-12), Err(Error::RootBracket { .. })));
    }

    proptest! {
        #[test]
        fn lift_is_degree_two(y in -3.0f64..3.0, a in -0.05f64..0.05) {
            for f in [FiberMap::experimental(a), FiberMap::doubling(a), FiberMap::intermittent(0.01, a).unwrap()] {
                let d = f.lift(y + 1.0) - f.lift(y) - 2.0;
                prop_assert!(d.abs() < 1e-12);
            }
        }

        #[test]
        fn derivative_positive(y in 0.0f64..1.0, a in -2.0f64..2.0) {
            prop_assert!(FiberMap::experimental(a).deriv(y) > 0.0);
            prop_assert!(FiberMap::intermittent(0.009, a).unwrap().deriv(y) > 0.0);
        }

        #[test]
        fn fiber_preimages_round_trip(t in 0.0f64..1.0, a in -0.05f64..0.05) {
            for f in [FiberMap::experimental(a), FiberMap::intermittent(0.01, a * 40.0).unwrap()] {
                let [p, q] = f.preimages(t, 1e-13).unwrap();
                prop_assert!(p < q);
                for y in [p, q] {
                    let d = super::super::torus::circle_diff(f.eval(y), t).abs();
                    prop_assert!(d < 1e-11);
                }
            }
        }
    }
}
