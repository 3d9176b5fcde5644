use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hermitian_det;
use crate::error::Result;
use crate::special::erfc_complex;

/// `exp(−|s|²/2 − |s'|²/2 + s s̄')`.
fn gaussian(s: Complex64, sp: Complex64) -> Complex64 {
    (-0.5 * s.norm_sqr() - 0.5 * sp.norm_sqr() + s * sp.conj()).exp()
}

/// The scalar kernel `(1/π) exp(−|s|²/2 − |s'|²/2 + s s̄')` of the complex bulk.
pub fn complex_bulk_kernel(s: Complex64, sp: Complex64) -> Complex64 {
    gaussian(s, sp) / std::f64::consts::PI
}

/// The scalar kernel `(1/(2π)) exp(−|s|²/2 − |s'|²/2 + s s̄') erfc((s ū + s̄' u)/√2)` of the
/// complex edge at `|u| = 1`.
///
/// Deep inside the spectrum this tends to the bulk kernel, so the one-point density goes
/// from `1/π` inside to `0` outside.
pub fn complex_edge_kernel(u: Complex64, s: Complex64, sp: Complex64) -> Result<Complex64> {
    let e = erfc_complex((s * u.conj() + sp.conj() * u) / std::f64::consts::SQRT_2)?;
    Ok(gaussian(s, sp) * e / (2.0 * std::f64::consts::PI))
}

/// `det[(1/π) exp(−|s_k|²/2 − |s_k'|²/2 + s_k s̄_k')]`, the limiting `R_{0,m}` in the complex bulk.
///
/// ```
/// use ginibre::limits::limit_density_complex_bulk;
/// use ginibre::Complex64;
/// let one = limit_density_complex_bulk(&[Complex64::new(0.4, -2.0)]);
/// assert!((one - 1.0 / std::f64::consts::PI).abs() < 1e-15);
/// ```
pub fn limit_density_complex_bulk(points: &[Complex64]) -> f64 {
    let n = points.len();
    hermitian_det(DMatrix::from_fn(n, n, |i, j| complex_bulk_kernel(points[i], points[j])))
}

/// The determinant of [`complex_edge_kernel`] over `points`, the limiting `R_{0,m}` at the
/// complex edge.
pub fn limit_density_complex_edge(u: Complex64, points: &[Complex64]) -> Result<f64> {
    let n = points.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            k[(i, j)] = complex_edge_kernel(u, points[i], points[j])?;
        }
    }
    Ok(hermitian_det(k))
}
