use num_complex::Complex64;

use super::check_order;
use crate::error::Result;
use crate::special::{ln_erfc_real, ln_lower_gamma, log_gamma, sgn, MAX_ORDER};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// The correction term
///
/// `r_M(z, x) = e^{−z²/2}/√(2π) · √erfc(√2|Im z|) · 2^{M−3/2}/(2M−2)! · sgn(x) · z^{2M−1} · γ(M − ½, x²/2)`,
///
/// evaluated in log space. `|Im z|` is used so that `r_M(z̄, x)` carries the same weight as
/// `r_M(z, x)`.
///
/// ```
/// use ginibre::kernel::r_correction;
/// use ginibre::Complex64;
/// assert_eq!(r_correction(7, Complex64::new(1.0, 1.0), 0.0).unwrap(), Complex64::new(0.0, 0.0));
/// ```
pub fn r_correction(m: usize, z: Complex64, x: f64) -> Result<Complex64> {
    check_order(m, MAX_ORDER)?;
    let sign = sgn(x);
    if sign == 0.0 || z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mf = m as f64;
    let power = 2 * m - 1;
    let ln_real = -HALF_LN_2PI
        + 0.5 * ln_erfc_real(std::f64::consts::SQRT_2 * z.im.abs())
        + (mf - 1.5) * std::f64::consts::LN_2
        - log_gamma(2.0 * mf - 1.0)?
        + ln_lower_gamma(mf - 0.5, 0.5 * x * x)?;
    let ln = if z.im == 0.0 {
        Complex64::new(ln_real - 0.5 * z.re * z.re + power as f64 * z.re.abs().ln(), 0.0)
    } else {
        Complex64::new(ln_real, 0.0) - 0.5 * z * z + power as f64 * z.ln()
    };
    let mut value = ln.exp() * sign;
    if z.im == 0.0 && z.re < 0.0 {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::regularized_gamma_p;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct evaluation with plain floating-point products, valid for small `M`.
    fn direct(m: usize, z: Complex64, x: f64) -> Complex64 {
        let mut fact = 1.0;
        for k in 2..=(2 * m - 2) {
            fact *= k as f64;
        }
        let a = m as f64 - 0.5;
        let lower = regularized_gamma_p(a, 0.5 * x * x).unwrap() * log_gamma(a).unwrap().exp();
        (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
            * crate::special::erfc_real(std::f64::consts::SQRT_2 * z.im.abs()).sqrt()
            * 2f64.powf(m as f64 - 1.5)
            / fact
            * sgn(x)
            * z.powu(2 * m as u32 - 1)
            * lower
    }

    #[test]
    fn matches_direct_products() {
        for m in [1, 2, 5, 12] {
            for (z, x) in [(c(1.0, 1.0), 1.0), (c(-0.7, 0.0), -2.0), (c(2.0, 0.3), 0.5), (c(0.4, 0.0), 3.0)] {
                let got = r_correction(m, z, x).unwrap();
                let want = direct(m, z, x);
                assert!((got - want).norm() <= 1e-12 * want.norm().max(1e-300), "m={m} z={z} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn conjugate_argument() {
        let z = c(0.8, 0.6);
        let a = r_correction(6, z, 1.2).unwrap();
        let b = r_correction(6, z.conj(), 1.2).unwrap();
        assert!((a.conj() - b).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn odd_in_x() {
        let z = c(0.3, 0.2);
        let a = r_correction(4, z, 0.9).unwrap();
        let b = r_correction(4, z, -0.9).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn decays_with_m() {
        // |r_M(z, x)| is bounded by e^{−Re z²/2}√erfc(√2 Im z)|z|^{2M−1}/(2^M Γ(M)).
        let z = c(1.0, 1.0);
        let mut prev = f64::INFINITY;
        for m in [5, 10, 20, 40] {
            let v = r_correction(m, z, 1.0).unwrap().norm();
            let mf = m as f64;
            let bound = (-(z * z).re / 2.0
                + 0.5 * ln_erfc_real(std::f64::consts::SQRT_2 * z.im)
                + (2.0 * mf - 1.0) * z.norm().ln()
                - mf * std::f64::consts::LN_2
                - log_gamma(mf).unwrap())
            .exp();
            assert!(v < prev && v <= bound, "m={m}: {v} vs bound {bound}");
            prev = v;
        }
    }
}
