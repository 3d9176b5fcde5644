//! Eigenvalue correlation functions of the real Ginibre ensemble.
//!
//! Correlation functions of the eigenvalues of `2M × 2M` real Gaussian matrices are Pfaffians
//! of `2 × 2` matrix kernels. This crate evaluates the finite-size kernel, the four scaling
//! limits (real bulk, real edge, complex bulk, complex edge) and the complex Ginibre
//! analogues, and cross-checks them against brute-force quadrature and Monte Carlo sampling.

pub mod correlation;
pub mod error;
pub mod figures;
pub mod grid;
pub mod kernel;
pub mod limits;
pub mod montecarlo;
pub mod oracle;
pub mod pfaffian;
pub mod quadrature;
pub mod special;
pub mod validate;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Version of the library, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
