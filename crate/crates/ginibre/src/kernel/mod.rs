//! The finite-size real Ginibre matrix kernel.
//!
//! Two independent evaluations are provided: [`kernel_closed_form`] uses the closed
//! expressions in terms of truncated exponentials, and [`kernel_skew_sum`] sums over the
//! skew-orthogonal polynomials directly. They differ by a diagonal gauge of determinant one,
//! so Pfaffians built from either agree.

mod closed_form;
mod partition;
mod r_correction;
mod skew_sum;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_erfc_real, log_gamma, sgn};

pub use closed_form::kernel_closed_form;
pub use partition::partition_function;
pub use r_correction::r_correction;
pub use skew_sum::{kernel_skew_sum, SKEW_SUM_MAX_ORDER};

/// Inputs with `|Im| ≤` this are treated as real.
pub const REAL_AXIS_TOLERANCE: f64 = 1e-12;

/// A point of the closed upper half plane, classified as real or strictly complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    Real(f64),
    Complex(Complex64),
}

impl Point {
    /// Classifies `z`: real when `|Im z| ≤ 1e−12`, complex when `Im z > 1e−12`.
    ///
    /// Points below the real axis are rejected rather than conjugated.
    ///
    /// ```
    /// use ginibre::kernel::Point;
    /// use ginibre::Complex64;
    /// assert_eq!(Point::classify(Complex64::new(1.0, 1e-13)).unwrap(), Point::Real(1.0));
    /// assert!(Point::classify(Complex64::new(1.0, -0.5)).is_err());
    /// ```
    pub fn classify(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite point {z}")));
        }
        if z.im.abs() <= REAL_AXIS_TOLERANCE {
            Ok(Point::Real(z.re))
        } else if z.im > 0.0 {
            Ok(Point::Complex(z))
        } else {
            Err(Error::LowerHalfPlane { re: z.re, im: z.im })
        }
    }

    pub fn value(&self) -> Complex64 {
        match *self {
            Point::Real(x) => Complex64::new(x, 0.0),
            Point::Complex(z) => z,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Point::Real(_))
    }

    /// The point translated by `c`, reclassified.
    pub fn shifted(&self, c: Complex64) -> Result<Self> {
        Point::classify(self.value() + c)
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::Real(x)
    }
}

/// One `2 × 2` block `[[DS(γ,γ'), S(γ,γ')], [−S(γ',γ), IS(γ,γ') + E(γ,γ')]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelBlock {
    pub ds: Complex64,
    pub s: Complex64,
    /// `S(γ', γ)`.
    pub s_swapped: Complex64,
    pub is_plus_e: Complex64,
    /// Set when a truncated exponential sum lost its relative accuracy to cancellation.
    #[serde(default)]
    pub precision_loss: bool,
}

impl KernelBlock {
    pub fn new(ds: Complex64, s: Complex64, s_swapped: Complex64, is_plus_e: Complex64) -> Self {
        Self {
            ds,
            s,
            s_swapped,
            is_plus_e,
            precision_loss: false,
        }
    }

    /// The assembled `2 × 2` matrix.
    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.ds, self.s, -self.s_swapped, self.is_plus_e)
    }

    /// The block for the swapped argument pair, `−Kᵀ`.
    pub fn swapped(&self) -> Self {
        Self {
            ds: -self.ds,
            s: self.s_swapped,
            s_swapped: self.s,
            is_plus_e: -self.is_plus_e,
            precision_loss: self.precision_loss,
        }
    }

    /// Largest entrywise distance to `other`.
    pub fn distance(&self, other: &KernelBlock) -> f64 {
        [
            self.ds - other.ds,
            self.s - other.s,
            self.s_swapped - other.s_swapped,
            self.is_plus_e - other.is_plus_e,
        ]
        .iter()
        .fold(0.0, |acc, d| acc.max(d.norm()))
    }
}

/// `E(γ, γ') = ½ sgn(γ − γ')` when both points are real and `0` otherwise.
pub fn e_term(g: Point, g2: Point) -> f64 {
    match (g, g2) {
        (Point::Real(x), Point::Real(y)) => 0.5 * sgn(x - y),
        _ => 0.0,
    }
}

/// The weight `φ(γ) = exp(−γ²/4 − γ̄²/4)·√erfc(√2 |Im γ|)` of the real Ginibre ensemble.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GinibreWeight;

impl GinibreWeight {
    /// `ln φ(γ)`; `φ` is real and positive.
    pub fn ln_value(&self, g: Complex64) -> f64 {
        -0.5 * (g.re * g.re - g.im * g.im) + 0.5 * ln_erfc_real(std::f64::consts::SQRT_2 * g.im.abs())
    }

    /// `φ(γ)`.
    ///
    /// ```
    /// use ginibre::kernel::GinibreWeight;
    /// use ginibre::Complex64;
    /// let x = 1.3_f64;
    /// assert_eq!(GinibreWeight.value(Complex64::new(x, 0.0)), (-x * x / 2.0).exp());
    /// ```
    pub fn value(&self, g: Complex64) -> f64 {
        self.ln_value(g).exp()
    }
}

/// The pair of skew-orthogonal polynomials `π_{2m}(γ) = γ^{2m}`,
/// `π_{2m+1}(γ) = γ^{2m+1} − 2mγ^{2m−1}` for the real Ginibre weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkewOrthogonalPair {
    pub m: usize,
}

impl SkewOrthogonalPair {
    pub fn new(m: usize) -> Self {
        Self { m }
    }

    pub fn even(&self, g: Complex64) -> Complex64 {
        g.powu(2 * self.m as u32)
    }

    pub fn odd(&self, g: Complex64) -> Complex64 {
        if self.m == 0 {
            g
        } else {
            g.powu(2 * self.m as u32 - 1) * (g * g - 2.0 * self.m as f64)
        }
    }

    /// `ln⟨π_{2m}|π_{2m+1}⟩ = ln(2√(2π)·(2m)!)`.
    pub fn ln_norm(&self) -> f64 {
        LN_2_SQRT_2PI + ln_factorial(2 * self.m)
    }
}

pub(crate) const LN_2_SQRT_2PI: f64 = 1.612_085_713_764_618;
pub(crate) const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub(crate) fn ln_factorial(n: usize) -> f64 {
    log_gamma(n as f64 + 1.0).expect("positive argument")
}

/// Validates the truncation parameter `M` against `max`.
pub(crate) fn check_order(m: usize, max: usize) -> Result<()> {
    if m == 0 || m > max {
        return Err(Error::Domain(format!(
            "truncation parameter M must lie in 1..={max}, got {m}"
        )));
    }
    Ok(())
}
