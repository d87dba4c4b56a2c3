use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::fiber::FiberMap;
use super::torus::{wrap01, TorusPoint};
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Default bisection tolerance for fiber preimages.
pub const PREIMAGE_TOL: f64 = 1e-12;

/// One-parameter families of skew products, parameterised by `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// `(x, y) ↦ (m x, f_{ε,a}(y) + δ ε cos 2πx)`.
    Theoretical { epsilon: f64, delta: f64, m: u32 },
    /// `(x, y) ↦ (m x, f(y) + δ cos 2πx + a)` with the closed-form `f`.
    Experimental { delta: f64, m: u32 },
}

impl Family {
    pub fn experimental_default() -> Self {
        Family::Experimental { delta: 0.01, m: 7 }
    }

    pub fn at(&self, a: f64) -> Result<SkewSystem> {
        match *self {
            Family::Theoretical { epsilon, delta, m } => SkewSystem::theoretical(epsilon, a, delta, m),
            Family::Experimental { delta, m } => SkewSystem::experimental(a, delta, m),
        }
    }

    pub fn delta(&self) -> f64 {
        match *self {
            Family::Theoretical { delta, .. } | Family::Experimental { delta, .. } => delta,
        }
    }

    pub fn m(&self) -> u32 {
        match *self {
            Family::Theoretical { m, .. } | Family::Experimental { m, .. } => m,
        }
    }

    pub fn with_m(self, m: u32) -> Self {
        match self {
            Family::Theoretical { epsilon, delta, .. } => Family::Theoretical { epsilon, delta, m },
            Family::Experimental { delta, .. } => Family::Experimental { delta, m },
        }
    }

    pub fn id(&self) -> String {
        match *self {
            Family::Theoretical { epsilon, delta, m } => {
                format!("theoretical(eps={epsilon},delta={delta},m={m})")
            }
            Family::Experimental { delta, m } => format!("experimental(delta={delta},m={m})"),
        }
    }
}

/// `DF` at a point. Always lower triangular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian {
    /// `∂x'/∂x = m`.
    pub dx_dx: f64,
    /// `∂y'/∂x = -2π · coupling · sin 2πx`.
    pub dy_dx: f64,
    /// `∂y'/∂y = f'(y)`.
    pub dy_dy: f64,
}

impl Jacobian {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.dx_dx, 0.0], [self.dy_dx, self.dy_dy]]
    }

    pub fn det(&self) -> f64 {
        self.dx_dx * self.dy_dy
    }
}

/// `F(x, y) = (m x mod 1, f(y) + coupling · cos 2πx mod 1)`.
#[derive(Debug, Clone)]
pub struct SkewSystem {
    m: u32,
    fiber: FiberMap,
    coupling: f64,
}

impl SkewSystem {
    pub fn new(m: u32, fiber: FiberMap, coupling: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("base multiplier m must be positive".into()));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidInput(format!("coupling must be finite, got {coupling}")));
        }
        Ok(Self { m, fiber, coupling })
    }

    /// `F_{ε,a,δ,m}`; the coupling is `δ ε`.
    pub fn theoretical(epsilon: f64, a: f64, delta: f64, m: u32) -> Result<Self> {
        Self::new(m, FiberMap::intermittent(epsilon, a)?, delta * epsilon)
    }

    /// The closed-form family; the offset `a` lives in the fiber map, the coupling is `δ`.
    pub fn experimental(a: f64, delta: f64, m: u32) -> Result<Self> {
        Self::new(m, FiberMap::experimental(a), delta)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn fiber(&self) -> &FiberMap {
        &self.fiber
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn with_m(&self, m: u32) -> Result<Self> {
        Self::new(m, self.fiber.clone(), self.coupling)
    }

    #[inline]
    pub fn eval(&self, p: TorusPoint) -> TorusPoint {
        let (x, y) = (p.x(), p.y());
        let xn = self.m as f64 * x;
        let yn = self.fiber.lift(y) + self.coupling * (TWO_PI * x).cos();
        TorusPoint::new(xn, yn)
    }

    /// Unreduced fiber image `L(y) + coupling · cos 2πx`.
    #[inline]
    pub fn fiber_image_lift(&self, x: f64, y: f64) -> f64 {
        self.fiber.lift(y) + self.coupling * (TWO_PI * x).cos()
    }

    pub fn jacobian(&self, p: TorusPoint) -> Jacobian {
        Jacobian {
            dx_dx: self.m as f64,
            dy_dx: -TWO_PI * self.coupling * (TWO_PI * p.x()).sin(),
            dy_dy: self.fiber.deriv(p.y()),
        }
    }

    /// All `2m` preimages of `p`, grouped by base branch `k = 0..m` with the
    /// two fiber branches in ascending order.
    pub fn preimages(&self, p: TorusPoint, tol: f64) -> Result<Vec<TorusPoint>> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("preimage tolerance must be positive, got {tol}")));
        }
        let m = self.m as f64;
        let mut out = Vec::with_capacity(2 * self.m as usize);
        for k in 0..self.m {
            let x = (p.x() + k as f64) / m;
            let target = p.y() - self.coupling * (TWO_PI * x).cos();
            let [y0, y1] = self.fiber.preimages(wrap01(target), tol)?;
            out.push(TorusPoint::new(x, y0));
            out.push(TorusPoint::new(x, y1));
        }
        Ok(out)
    }
}
