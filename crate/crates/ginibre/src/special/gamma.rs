//! Log-gamma and the regularized incomplete gamma functions.

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Tail of the Stirling series, `ln Γ(a) − [(a − ½)ln a − a + ½ln 2π]`, for `a ≥ 15`.
fn stirling_tail(a: f64) -> f64 {
    let r = 1.0 / a;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0))))))
}

/// Natural logarithm of the gamma function for `a > 0`.
///
/// ```
/// use ginibre::special::log_gamma;
/// assert_eq!(log_gamma(1.0).unwrap(), 0.0);
/// let half = log_gamma(0.5).unwrap();
/// assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-15);
/// ```
pub fn log_gamma(a: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires a > 0, got {a}")));
    }
    if a == 1.0 || a == 2.0 {
        return Ok(0.0);
    }
    if a.fract() == 0.0 && a <= 25.0 {
        let mut f = 1.0_f64;
        for k in 2..(a as u64) {
            f *= k as f64;
        }
        return Ok(f.ln());
    }
    if a >= 15.0 {
        return Ok((a - 0.5) * a.ln() - a + HALF_LN_2PI + stirling_tail(a));
    }
    // Shift upward and divide out the rising factorial.
    let mut shift = 1.0;
    let mut b = a;
    while b < 15.0 {
        shift *= b;
        b += 1.0;
    }
    Ok((b - 0.5) * b.ln() - b + HALF_LN_2PI + stirling_tail(b) - shift.ln())
}

/// `ln[xᵃ e^{−x} / Γ(a + 1)]`, accurate when `a` and `x` are both large.
fn ln_power_prefactor(a: f64, x: f64) -> f64 {
    if a >= 15.0 {
        let h = (x - a) / a;
        let core = if h.abs() < 0.25 {
            ln1p_minus(h)
        } else {
            (x / a).ln() - h
        };
        a * core - 0.5 * (std::f64::consts::TAU * a).ln() - stirling_tail(a)
    } else {
        a * x.ln() - x - log_gamma(a + 1.0).expect("a + 1 > 0")
    }
}

/// `ln(1 + h) − h` without cancellation for small `h`.
fn ln1p_minus(h: f64) -> f64 {
    if h == 0.0 {
        0.0
    } else if h.abs() < 1e-2 {
        // −h²/2 + h³/3 − h⁴/4 + …
        let mut term = -h * h / 2.0;
        let mut sum = term;
        let mut k = 2.0;
        loop {
            term *= -h * k / (k + 1.0);
            sum += term;
            k += 1.0;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        h.ln_1p() - h
    }
}

/// Natural logarithms of the regularized incomplete gamma functions `(ln P(a, x), ln Q(a, x))`.
///
/// The series is used for `x < a + 1` and Lentz's continued fraction otherwise.
pub fn ln_regularized_gamma(a: f64, x: f64) -> Result<(f64, f64)> {
    if a.is_nan() || a <= 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete gamma requires a > 0, got {a}"
        )));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "incomplete gamma requires x ≥ 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    if x == f64::INFINITY {
        return Ok((0.0, f64::NEG_INFINITY));
    }
    let ln_pre = ln_power_prefactor(a, x);
    if x < a + 1.0 {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut n = 1.0;
        loop {
            term *= x / (a + n);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
            n += 1.0;
            if n > 1e6 {
                return Err(Error::Domain("incomplete gamma series did not converge".into()));
            }
        }
        let ln_p = ln_pre + sum.ln();
        let p = ln_p.exp();
        Ok((ln_p, (-p).ln_1p()))
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut i = 1.0;
        loop {
            let an = -i * (i - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
            i += 1.0;
            if i > 1e6 {
                return Err(Error::Domain(
                    "incomplete gamma continued fraction did not converge".into(),
                ));
            }
        }
        // Q = xᵃe^{−x}/Γ(a) · h and xᵃe^{−x}/Γ(a) = a · xᵃe^{−x}/Γ(a + 1).
        let ln_q = ln_pre + a.ln() + h.ln();
        let q = ln_q.exp();
        Ok(((-q).ln_1p(), ln_q))
    }
}

/// Regularized lower incomplete gamma function `P(a, x) = γ(a, x)/Γ(a)`.
///
/// ```
/// use ginibre::special::{regularized_gamma_p, erfc_real};
/// // P(1/2, x²) = erf(x)
/// let x = 0.8_f64;
/// let p = regularized_gamma_p(0.5, x * x).unwrap();
/// assert!((p - (1.0 - erfc_real(x))).abs() < 1e-14);
/// ```
pub fn regularized_gamma_p(a: f64, x: f64) -> Result<f64> {
    Ok(ln_regularized_gamma(a, x)?.0.exp())
}

/// Regularized upper incomplete gamma function `Q(a, x) = 1 − P(a, x)`.
pub fn regularized_gamma_q(a: f64, x: f64) -> Result<f64> {
    Ok(ln_regularized_gamma(a, x)?.1.exp())
}

/// Logarithm of the lower incomplete gamma function `ln γ(a, x)`.
pub fn ln_lower_gamma(a: f64, x: f64) -> Result<f64> {
    Ok(ln_regularized_gamma(a, x)?.0 + log_gamma(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::erfc_real;

    #[test]
    fn log_gamma_trivial_points() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        let half = log_gamma(0.5).unwrap();
        assert!((half - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_gamma_matches_exact_factorials() {
        // Exact integer factorials computed in u128, then compared at 1e-13 relative.
        let mut f: u128 = 1;
        for n in 2..=33u32 {
            f *= u128::from(n);
            let want = (f as f64).ln();
            let got = log_gamma(f64::from(n) + 1.0).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "n={n}: {got} vs {want}");
        }
        let twenty: u128 = (1..=20u128).product();
        let got = log_gamma(21.0).unwrap();
        assert!((got - (twenty as f64).ln()).abs() < 1e-13 * got);
    }

    #[test]
    fn log_gamma_frozen_values() {
        let cases = [
            (0.1, 2.252_712_651_734_206),
            (1.5, -0.120_782_237_635_245_22),
            (3.7, 1.428_072_326_665_388),
            (14.9, 24.924_132_002_217_278),
            (15.2, 25.727_462_988_765_575),
            (399.5, 1_991.514_439_444_562_4),
            (1023.0, 6_064.349_918_178_499),
        ];
        for (a, want) in cases {
            let got = log_gamma(a).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "a={a}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn p_at_zero_and_infinity() {
        assert_eq!(regularized_gamma_p(3.0, 0.0).unwrap(), 0.0);
        assert_eq!(regularized_gamma_p(3.0, f64::INFINITY).unwrap(), 1.0);
        assert!(regularized_gamma_p(0.0, 1.0).is_err());
    }

    #[test]
    fn p_half_is_erf() {
        for k in 1..60 {
            let x = k as f64 * 0.1;
            let p = regularized_gamma_p(0.5, x * x).unwrap();
            let erf = 1.0 - erfc_real(x);
            assert!((p - erf).abs() < 2e-15, "x={x}");
            let q = regularized_gamma_q(0.5, x * x).unwrap();
            assert!((q - erfc_real(x)).abs() < 1e-13 * erfc_real(x), "x={x}: {q} vs {}", erfc_real(x));
        }
    }

    #[test]
    fn frozen_pq_values() {
        // (a, x, P, Q) at 40-digit working precision.
        let cases = [
            (99.5, 100.0, 0.533_254_256_498_621_8, 0.466_745_743_501_378_2),
            (2.5, 1.0, 0.150_854_963_915_390_36, 0.849_145_036_084_609_6),
            (10.0, 30.0, 0.999_992_878_249_137_2, 7.121_750_862_815_577e-6),
            (399.0, 400.0, 0.526_592_088_643_938_5, 0.473_407_911_356_061_5),
            (0.5, 1e-6, 1.128_378_790_969_236_4e-3, 0.998_871_621_209_030_8),
            (300.5, 250.0, 1.052_475_336_470_363_5e-3, 0.998_947_524_663_529_6),
            (300.5, 360.0, 0.999_418_490_058_223_2, 5.815_099_417_767_996e-4),
            (1.5, 40.0, 1.0, 3.069_277_486_172_417e-17),
            (50.0, 0.01, 3.255_872_177_214_893_4e-165, 1.0),
        ];
        for (a, x, p, q) in cases {
            let got_p = regularized_gamma_p(a, x).unwrap();
            let got_q = regularized_gamma_q(a, x).unwrap();
            assert!(((got_p - p) / p).abs() < 1e-12, "P({a},{x}) = {got_p} vs {p}");
            assert!(((got_q - q) / q).abs() < 1e-12, "Q({a},{x}) = {got_q} vs {q}");
        }
    }

    #[test]
    fn p_is_monotone_in_x() {
        for &a in &[0.5, 3.0, 40.5, 399.5] {
            let mut prev = 0.0;
            for k in 1..400 {
                let x = k as f64 * a / 100.0;
                let p = regularized_gamma_p(a, x).unwrap();
                assert!(p >= prev && p <= 1.0, "a={a} x={x}");
                prev = p;
            }
        }
    }
}
