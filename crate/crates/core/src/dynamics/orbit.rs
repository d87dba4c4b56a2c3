use serde::{Deserialize, Serialize};

use crate::maps::{SkewSystem, TorusPoint};
use crate::rng::{derive_seed, XorShift64Star};

pub const DEFAULT_BURN_IN: u64 = 1_000;
pub const DEFAULT_LENGTH: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialPoint {
    Point(TorusPoint),
    /// Drawn uniformly from the torus using the orbit seed.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    pub initial: InitialPoint,
    pub burn_in: u64,
    pub length: u64,
    pub seed: u64,
}

impl Default for OrbitSpec {
    fn default() -> Self {
        Self {
            initial: InitialPoint::Random,
            burn_in: DEFAULT_BURN_IN,
            length: DEFAULT_LENGTH,
            seed: 0,
        }
    }
}

impl OrbitSpec {
    pub fn random(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn from_point(p: TorusPoint) -> Self {
        Self {
            initial: InitialPoint::Point(p),
            ..Self::default()
        }
    }

    pub fn with_length(self, length: u64) -> Self {
        Self { length, ..self }
    }

    pub fn with_burn_in(self, burn_in: u64) -> Self {
        Self { burn_in, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// The starting point `p₀`.
    pub fn initial_point(&self) -> TorusPoint {
        match self.initial {
            InitialPoint::Point(p) => p,
            InitialPoint::Random => {
                let mut rng = XorShift64Star::new(derive_seed(self.seed, 0x6f_7262_6974));
                let x = rng.next_f64();
                let y = rng.next_f64();
                TorusPoint::new(x, y)
            }
        }
    }
}

/// Streaming orbit: yields `p_k` for `k ∈ [burn_in, burn_in + length)`.
pub struct Orbit<'a> {
    system: &'a SkewSystem,
    current: TorusPoint,
    remaining: u64,
}

impl Iterator for Orbit<'_> {
    type Item = TorusPoint;

    #[inline]
    fn next(&mut self) -> Option<TorusPoint> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let p = self.current;
        self.current = self.system.eval(p);
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

pub fn iterate<'a>(system: &'a SkewSystem, spec: &OrbitSpec) -> Orbit<'a> {
    let mut p = spec.initial_point();
    for _ in 0..spec.burn_in {
        p = system.eval(p);
    }
    Orbit {
        system,
        current: p,
        remaining: spec.length,
    }
}
