use serde::{Deserialize, Serialize};

/// Reduces `v` to the fundamental domain `[0, 1)`.
#[inline]
pub fn wrap01(v: f64) -> f64 {
    let r = v - v.floor();
    // v = -1e-17 gives r = 1.0 after rounding
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Signed distance on the circle, in `[-1/2, 1/2)`.
#[inline]
pub fn circle_diff(a: f64, b: f64) -> f64 {
    let d = wrap01(a - b);
    if d >= 0.5 {
        d - 1.0
    } else {
        d
    }
}

/// A point of the 2-torus, coordinates always in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: wrap01(x),
            y: wrap01(y),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Euclidean distance in the flat torus metric.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        circle_diff(self.x, other.x).hypot(circle_diff(self.y, other.y))
    }
}
