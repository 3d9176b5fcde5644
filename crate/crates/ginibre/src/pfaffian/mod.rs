//! Pfaffians of complex antisymmetric matrices and the Pfaffian identities used by the theory.

mod identities;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use identities::{
    cauchy_binet_residual, fredholm_expansion_residual, pfaffian_scaling_check,
};

/// Entries whose antisymmetry violation is below this (relative to `max(1, max|A|)`) are
/// projected onto the antisymmetric part; larger violations are rejected.
pub const ANTISYMMETRY_TOLERANCE: f64 = 1e-12;

/// Pivots below this multiple of the largest entry are treated as zero.
pub const PIVOT_THRESHOLD: f64 = 1e-13;

/// An even-dimensional complex matrix with `A = −Aᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    m: DMatrix<Complex64>,
}

impl AntisymmetricMatrix {
    /// Validates and antisymmetrizes `m`.
    ///
    /// Fails on non-square or odd-dimensional input, or when `max|A + Aᵀ|` exceeds
    /// [`ANTISYMMETRY_TOLERANCE`]`·max(1, max|A|)`.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::Dimension(format!(
                "antisymmetric matrix must be square, got {}x{}",
                n,
                m.ncols()
            )));
        }
        if n % 2 != 0 {
            return Err(Error::Dimension(format!(
                "antisymmetric matrix must have even dimension, got {n}"
            )));
        }
        let scale = m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
        let mut violation = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                violation = violation.max((m[(i, j)] + m[(j, i)]).norm());
            }
        }
        if violation.is_nan() || violation > ANTISYMMETRY_TOLERANCE * scale {
            return Err(Error::NotAntisymmetric { violation });
        }
        Ok(Self::project(m))
    }

    /// Builds a matrix from real entries.
    pub fn from_real(m: DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    /// Returns `(A − Aᵀ)/2` without checking how far `m` was from antisymmetric.
    pub fn project(m: DMatrix<Complex64>) -> Self {
        let n = m.nrows();
        let mut out = m;
        for i in 0..n {
            out[(i, i)] = Complex64::new(0.0, 0.0);
            for j in (i + 1)..n {
                let v = 0.5 * (out[(i, j)] - out[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = -v;
            }
        }
        Self { m: out }
    }

    /// Builds a matrix from its strict upper triangle, filling the rest by antisymmetry.
    pub fn from_upper(dim: usize, mut upper: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        if dim % 2 != 0 {
            return Err(Error::Dimension(format!(
                "antisymmetric matrix must have even dimension, got {dim}"
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = upper(i, j);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        Ok(Self { m })
    }

    /// The `2T × 2T` block-diagonal matrix of `[[0, 1], [−1, 0]]` blocks.
    pub fn symplectic(t: usize) -> Self {
        let mut m = DMatrix::zeros(2 * t, 2 * t);
        for k in 0..t {
            m[(2 * k, 2 * k + 1)] = Complex64::new(1.0, 0.0);
            m[(2 * k + 1, 2 * k)] = Complex64::new(-1.0, 0.0);
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    /// The Pfaffian of this matrix; see [`pfaffian`].
    pub fn pfaffian(&self) -> Complex64 {
        pfaffian(self)
    }
}

/// Pfaffian by Parlett–Reid skew tridiagonalization with partial pivoting.
///
/// Each step moves the largest entry of the current column into the subdiagonal, flips the
/// sign for the transposition, and eliminates below it with a skew rank-2 update. When every
/// candidate pivot is below [`PIVOT_THRESHOLD`] times the largest entry of the input, the
/// Pfaffian is structurally zero and exactly `0` is returned.
///
/// ```
/// use ginibre::pfaffian::{pfaffian, AntisymmetricMatrix};
/// use ginibre::Complex64;
/// let j = AntisymmetricMatrix::symplectic(3);
/// assert_eq!(pfaffian(&j), Complex64::new(1.0, 0.0));
/// ```
pub fn pfaffian(a: &AntisymmetricMatrix) -> Complex64 {
    let n = a.dim();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut m = a.m.clone();
    let scale = m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if scale == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let threshold = PIVOT_THRESHOLD * scale;
    let mut pf = Complex64::new(1.0, 0.0);
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = m[(k + 1, k)].norm();
        for i in (k + 2)..n {
            let v = m[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if best.is_nan() || best <= threshold {
            return Complex64::new(0.0, 0.0);
        }
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = m[(k, k + 1)];
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex64> = ((k + 2)..n).map(|j| m[(k, j)] / pivot).collect();
            let col: Vec<Complex64> = ((k + 2)..n).map(|i| m[(i, k + 1)]).collect();
            let len = n - k - 2;
            for ii in 0..len {
                for jj in 0..len {
                    m[(k + 2 + ii, k + 2 + jj)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}
