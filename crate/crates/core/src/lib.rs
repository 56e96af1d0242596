//! Desk-scale experiments with completely multiplicative functions.
//!
//! The crate provides the computable objects behind a family of
//! partition-regularity questions for quadratic equations: multiplicative
//! function evaluation over sieves, pretentious distance, Gowers uniformity
//! norms, lattice-restricted correlation averages over binary quadratic
//! forms, concentration statistics, multiplicative Folner densities, and
//! monochromatic-solution searches.
//!
//! Every average is a finite-N quantity with deterministic, thread-count
//! independent reductions; nothing here extrapolates to a limit.

pub mod concentration;
pub mod correlations;
pub mod distance;
pub mod error;
pub mod gowers;
pub mod multfn;
pub mod numeric;
pub mod quadforms;
pub mod regularity;

pub use error::{Error, Result};
