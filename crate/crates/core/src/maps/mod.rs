//! Circle endomorphisms, the skew products built over them, and the bump
//! function that creates the neutral fixed point.

pub mod bump;
pub mod fiber;
pub mod skew;
pub mod torus;

pub use bump::{build_phi, validate_phi, BumpParams, BumpProfile, PhiCondition, PhiReport};
pub use fiber::{FiberKind, FiberKindTag, FiberMap};
pub use skew::{Family, Jacobian, SkewSystem, PREIMAGE_TOL};
pub use torus::{circle_diff, wrap01, TorusPoint};
