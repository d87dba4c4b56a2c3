//! Partially hyperbolic endomorphisms of the 2-torus: skew products of
//! intermittent circle maps over `x ↦ m x`.
//!
//! The crate estimates SRB densities (Ulam discretisation of the transfer
//! operator), central Lyapunov exponents (Birkhoff averages along long
//! orbits), and tracks how the sign of the central exponent changes with the
//! fiber offset `a` while the SRB measure itself varies smoothly.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod cli;
pub mod cones;
pub mod dynamics;
pub mod error;
pub mod maps;
pub mod rng;
pub mod sum;
pub mod transfer;

pub use error::{Error, Result};
