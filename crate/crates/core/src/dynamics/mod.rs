//! Orbits, Birkhoff averages and the fixed-point structure of the fiber maps.

pub mod expansion;
pub mod fixed_points;
pub mod lyapunov;
pub mod orbit;
pub mod raster;
pub mod trapping;

pub use expansion::{min_iterate_derivative, uniform_expansion_certificate, ExpansionCertificate};
pub use fixed_points::{fiber_fixed_points, FiberFixedPoints, FixedPoint, Stability};
pub use lyapunov::{central_lyapunov, LyapunovEstimate};
pub use orbit::{iterate, InitialPoint, Orbit, OrbitSpec, DEFAULT_BURN_IN, DEFAULT_LENGTH};
pub use raster::{orbit_raster, DensityRaster};
pub use trapping::{check_trapping, TrapReport};
