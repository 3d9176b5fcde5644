//! Scaling limits of the real Ginibre kernel and the complex Ginibre kernels.
//!
//! Real-line regimes expose `2 × 2` kernel blocks. Regimes away from the real axis are
//! determinantal and expose densities only.

mod complex;
mod distance;
mod ginue;
mod origin;
mod real_edge;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_erfc_real;

pub use complex::{complex_bulk_kernel, complex_edge_kernel, limit_density_complex_bulk, limit_density_complex_edge};
pub use distance::finite_to_limit_distance;
pub use ginue::{complex_ginibre_kernel, ginue_bulk_kernel, ginue_edge_kernel};
pub use origin::limit_kernel_origin;
pub use real_edge::limit_kernel_real_edge;

/// Tolerance on `|u| = 1` for edge regimes.
pub const UNIT_CIRCLE_TOLERANCE: f64 = 1e-12;

/// Which kernel a correlation function is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelRegime {
    /// The `2M × 2M` real Ginibre ensemble.
    FiniteN { m: usize },
    /// Real bulk, including the origin.
    OriginBulk,
    /// Real edge at `u = ±1`.
    RealEdge { u: f64 },
    /// Bulk away from the real axis.
    ComplexBulk,
    /// Edge at `|u| = 1`, `Im u > 0`.
    ComplexEdge { u: Complex64 },
    /// The `N × N` complex Ginibre ensemble.
    ComplexGinibreFinite { n: usize },
    ComplexGinibreBulk,
    ComplexGinibreEdge { u: Complex64 },
}

impl KernelRegime {
    /// Checks the regime parameters.
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelRegime::FiniteN { m } => crate::kernel::check_order(m, crate::special::MAX_ORDER),
            KernelRegime::RealEdge { u } => {
                if u == 1.0 || u == -1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidRegime(format!("real edge needs u = ±1, got {u}")))
                }
            }
            KernelRegime::ComplexEdge { u } => {
                check_unit(u)?;
                if u.im <= 0.0 {
                    return Err(Error::InvalidRegime(format!("complex edge needs Im u > 0, got {u}")));
                }
                Ok(())
            }
            KernelRegime::ComplexGinibreEdge { u } => check_unit(u),
            KernelRegime::ComplexGinibreFinite { n } => {
                if n == 0 || n > 2 * crate::special::MAX_ORDER {
                    Err(Error::InvalidRegime(format!("complex Ginibre size must lie in 1..=1024, got {n}")))
                } else {
                    Ok(())
                }
            }
            KernelRegime::OriginBulk | KernelRegime::ComplexBulk | KernelRegime::ComplexGinibreBulk => Ok(()),
        }
    }

    /// `true` when correlations are determinants of a scalar kernel rather than Pfaffians.
    pub fn is_determinantal(&self) -> bool {
        matches!(
            self,
            KernelRegime::ComplexBulk
                | KernelRegime::ComplexEdge { .. }
                | KernelRegime::ComplexGinibreFinite { .. }
                | KernelRegime::ComplexGinibreBulk
                | KernelRegime::ComplexGinibreEdge { .. }
        )
    }

    /// A short lowercase name, as accepted by the command line.
    pub fn name(&self) -> &'static str {
        match self {
            KernelRegime::FiniteN { .. } => "finite",
            KernelRegime::OriginBulk => "origin",
            KernelRegime::RealEdge { .. } => "real-edge",
            KernelRegime::ComplexBulk => "complex-bulk",
            KernelRegime::ComplexEdge { .. } => "complex-edge",
            KernelRegime::ComplexGinibreFinite { .. } => "ginue",
            KernelRegime::ComplexGinibreBulk => "ginue-bulk",
            KernelRegime::ComplexGinibreEdge { .. } => "ginue-edge",
        }
    }
}

fn check_unit(u: Complex64) -> Result<()> {
    if (u.norm() - 1.0).abs() > UNIT_CIRCLE_TOLERANCE {
        return Err(Error::InvalidRegime(format!("edge point must have |u| = 1, got |u| = {}", u.norm())));
    }
    Ok(())
}

/// `½ ln erfc(√2 |Im z|)`.
pub(crate) fn ln_root_erfc(z: Complex64) -> f64 {
    0.5 * ln_erfc_real(std::f64::consts::SQRT_2 * z.im.abs())
}

pub(crate) const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Determinant of a small Hermitian kernel matrix, returned as a real number.
pub(crate) fn hermitian_det(k: nalgebra::DMatrix<Complex64>) -> f64 {
    if k.nrows() == 0 {
        return 1.0;
    }
    k.determinant().re
}
