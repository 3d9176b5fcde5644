use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{erfc_complex, scaled_exp_sum};

/// The finite-`N` complex Ginibre kernel for the weight `e^{−|γ|²}`,
///
/// `K_N(z, z') = (1/π) exp(−|z|²/2 − |z'|²/2) Σ_{k=0}^{N−1} (z z̄')^k/k!`.
///
/// This is the kernel of `N × N` matrices whose entries have independent real and imaginary
/// parts of variance `½`; its diagonal integrates to `N`.
///
/// ```
/// use ginibre::limits::complex_ginibre_kernel;
/// use ginibre::Complex64;
/// let zero = Complex64::new(0.0, 0.0);
/// let k = complex_ginibre_kernel(16, zero, zero).unwrap();
/// assert!((k.re - 1.0 / std::f64::consts::PI).abs() < 1e-16);
/// ```
pub fn complex_ginibre_kernel(n: usize, z: Complex64, zp: Complex64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("complex Ginibre size must be positive".into()));
    }
    let scale = Complex64::new(0.5 * z.norm_sqr() + 0.5 * zp.norm_sqr(), 0.0);
    let v = scaled_exp_sum(n - 1, z * zp.conj(), scale);
    Ok(v.value / std::f64::consts::PI)
}

/// The bulk limit `(1/π) exp(−|s|²/2 − |s'|²/2 + s s̄')` of [`complex_ginibre_kernel`] at
/// `z = u√N + s`, `|u| < 1`, up to a unimodular gauge.
pub fn ginue_bulk_kernel(s: Complex64, sp: Complex64) -> Complex64 {
    super::complex_bulk_kernel(s, sp)
}

/// The edge limit `(1/(2π)) exp(−|s|²/2 − |s'|²/2 + s s̄') erfc((s ū + s̄' u)/√2)` at `|u| = 1`.
pub fn ginue_edge_kernel(u: Complex64, s: Complex64, sp: Complex64) -> Result<Complex64> {
    let e = erfc_complex((s * u.conj() + sp.conj() * u) / std::f64::consts::SQRT_2)?;
    Ok((-0.5 * s.norm_sqr() - 0.5 * sp.norm_sqr() + s * sp.conj()).exp() * e / (2.0 * std::f64::consts::PI))
}
