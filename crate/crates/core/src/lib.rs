//! Exact non-Archimedean arithmetic: p-adic and function-field valuations,
//! ultrametric balls, finite-precision p-adic expansions, the max-norm space
//! K^t, and spectra of diagonal operators and their finite-rank
//! perturbations.
//!
//! Everything is computed over exact rationals; there is no floating point.

pub mod error;
pub mod linalg;
pub mod numeric;
pub mod padic;
pub mod perturbation;
pub mod spectral;
pub mod ultrametric;
pub mod valuation;
pub mod vectors;

pub use error::{Error, Result};
