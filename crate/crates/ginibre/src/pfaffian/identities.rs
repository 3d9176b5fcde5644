//! Pfaffian identities exposed as residual computations.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{pfaffian, AntisymmetricMatrix};
use crate::error::{Error, Result};

/// Returns `(Pf(D A Dᵀ), Pf(A)·det D)` for a diagonal `D` given by its entries.
///
/// ```
/// use ginibre::pfaffian::{pfaffian_scaling_check, AntisymmetricMatrix};
/// use ginibre::Complex64;
/// let a = AntisymmetricMatrix::symplectic(2);
/// let d = [Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
/// let (lhs, rhs) = pfaffian_scaling_check(&a, &d).unwrap();
/// assert!((lhs - rhs).norm() < 1e-15);
/// ```
pub fn pfaffian_scaling_check(
    a: &AntisymmetricMatrix,
    d: &[Complex64],
) -> Result<(Complex64, Complex64)> {
    let n = a.dim();
    if d.len() != n {
        return Err(Error::Dimension(format!(
            "diagonal has {} entries for a {n}x{n} matrix",
            d.len()
        )));
    }
    let m = a.as_matrix();
    let scaled = DMatrix::from_fn(n, n, |i, j| d[i] * m[(i, j)] * d[j]);
    let lhs = pfaffian(&AntisymmetricMatrix::project(scaled));
    let det: Complex64 = d.iter().product();
    Ok((lhs, pfaffian(a) * det))
}

fn inverse_transpose(b: &AntisymmetricMatrix, name: &str) -> Result<AntisymmetricMatrix> {
    let inv = b
        .as_matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularInput(format!("{name} is not invertible")))?;
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularInput(format!("{name} is not invertible")));
    }
    Ok(AntisymmetricMatrix::project(inv.transpose()))
}

/// Residual of the Pfaffian Cauchy–Binet identity
///
/// `Pf(C^{−T} − AᵀBA)/Pf(C^{−T}) = Pf(B^{−T} − ACAᵀ)/Pf(B^{−T})`
///
/// for a `2J × 2K` matrix `A` and antisymmetric `B` (`2J × 2J`) and `C` (`2K × 2K`).
pub fn cauchy_binet_residual(
    a: &DMatrix<Complex64>,
    b: &AntisymmetricMatrix,
    c: &AntisymmetricMatrix,
) -> Result<f64> {
    if a.nrows() != b.dim() || a.ncols() != c.dim() {
        return Err(Error::Dimension(format!(
            "A is {}x{}, B is {}x{}, C is {}x{}",
            a.nrows(),
            a.ncols(),
            b.dim(),
            b.dim(),
            c.dim(),
            c.dim()
        )));
    }
    let b_it = inverse_transpose(b, "B")?;
    let c_it = inverse_transpose(c, "C")?;
    let bm = b.as_matrix();
    let cm = c.as_matrix();
    let left = AntisymmetricMatrix::project(c_it.as_matrix() - a.transpose() * bm * a);
    let right = AntisymmetricMatrix::project(b_it.as_matrix() - a * cm * a.transpose());
    let pf_c_it = pfaffian(&c_it);
    let pf_b_it = pfaffian(&b_it);
    if pf_c_it.norm() == 0.0 || pf_b_it.norm() == 0.0 {
        return Err(Error::SingularInput("zero Pfaffian".into()));
    }
    Ok((pfaffian(&left) / pf_c_it - pfaffian(&right) / pf_b_it).norm())
}

/// Residual of the Fredholm expansion
///
/// `Pf(J + K) = 1 + Σ_{S=1}^{T} Σ_{|t|=S} Pf K_t`
///
/// where `K` is a `2T × 2T` antisymmetric matrix read as `T × T` blocks of size 2 and `K_t`
/// keeps the blocks indexed by the subset `t`. Supports `T ≤ 6`.
///
/// ```
/// use ginibre::pfaffian::{fredholm_expansion_residual, AntisymmetricMatrix};
/// let k = AntisymmetricMatrix::from_upper(2, |_, _| ginibre::Complex64::new(0.7, 0.0)).unwrap();
/// assert!(fredholm_expansion_residual(&k).unwrap() < 1e-15);
/// ```
pub fn fredholm_expansion_residual(k: &AntisymmetricMatrix) -> Result<f64> {
    let t = k.dim() / 2;
    if t > 6 {
        return Err(Error::Dimension(format!(
            "Fredholm expansion supports at most 6 blocks, got {t}"
        )));
    }
    let j = AntisymmetricMatrix::symplectic(t);
    let lhs = pfaffian(&AntisymmetricMatrix::project(j.as_matrix() + k.as_matrix()));
    let km = k.as_matrix();
    let mut rhs = Complex64::new(1.0, 0.0);
    for mask in 1u32..(1u32 << t) {
        let blocks: Vec<usize> = (0..t).filter(|b| mask & (1 << b) != 0).collect();
        let idx: Vec<usize> = blocks.iter().flat_map(|&b| [2 * b, 2 * b + 1]).collect();
        let s = idx.len();
        let sub = DMatrix::from_fn(s, s, |p, q| km[(idx[p], idx[q])]);
        rhs += pfaffian(&AntisymmetricMatrix::project(sub));
    }
    Ok((lhs - rhs).norm())
}
