//! The transfer operator: exact pointwise evaluation, Ulam discretisations
//! on circle and torus grids, stationary densities and spectral-gap
//! estimates.
//!
//! The subleading modulus of an Ulam matrix is a numerical proxy for the
//! spectral gap of the true operator; no claim is made that it approximates
//! any particular spectral bound.

pub mod build;
pub mod exact;
pub mod grid;
pub mod operator;
pub mod spectral;

pub use build::{
    ulam_1d, ulam_1d_exact, ulam_2d, ulam_2d_fiber_exact, DEFAULT_CELLS_1D, DEFAULT_GRID_2D,
    DEFAULT_SAMPLES_PER_CELL,
};
pub use exact::{integrate_observable, pf_apply_exact};
pub use grid::UlamGrid;
pub use operator::{UlamOperator, UlamScheme};
pub use spectral::{
    dense_spectrum, stationary_density, subleading_modulus, SpectralReport, SubleadingEstimate,
    DEFAULT_MAX_ITER, DEFAULT_TOL, NEAR_CRITICAL_MAX_ITER,
};
