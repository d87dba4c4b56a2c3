//! How the central exponent and the SRB measure depend on the offset `a`.

pub mod bisect;
pub mod smooth;
pub mod sweep;

pub use bisect::{find_sign_change, SignChange, SEEDS_PER_POINT};
pub use smooth::{smoothness_diagnostic, srb_integral, SmoothGrid, SmoothRow, SmoothnessTable};
pub use sweep::{parameter_grid, seed_for, sweep, SweepRecord, SweepTable};
