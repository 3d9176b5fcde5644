//! Truncated exponential sums `e_M`, `c_M`, `s_M` with an exponential prefactor folded in.

use num_complex::Complex64;

use super::gamma::log_gamma;
use crate::error::{Error, Result};

/// Largest truncation parameter supported by [`scaled_partial_exp`].
pub const MAX_ORDER: usize = 512;

/// Which truncated Taylor polynomial to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialExpKind {
    /// `e_M(t) = Σ_{k=0}^{2M−2} t^k/k!`
    Exp,
    /// `c_M(t) = Σ_{m=0}^{M−1} t^{2m}/(2m)!`
    Cosh,
    /// `s_M(t) = Σ_{m=1}^{M−1} t^{2m−1}/(2m−1)!`
    Sinh,
}

/// A scaled partial sum together with a cancellation warning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialExpValue {
    pub value: Complex64,
    /// Set when the result is below `1e−12` times the largest term, so its relative accuracy is lost.
    pub precision_loss: bool,
}

/// The pair (order `M`, argument `t`) defining `e_M(t)`, `c_M(t)`, `s_M(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPartialExp {
    pub order: usize,
    pub argument: Complex64,
}

impl ScaledPartialExp {
    pub fn new(order: usize, argument: Complex64) -> Self {
        Self { order, argument }
    }

    /// `e^{−scale}·(kind)_M(t)`.
    pub fn eval(&self, kind: PartialExpKind, scale: Complex64) -> Result<PartialExpValue> {
        scaled_partial_exp(kind, self.order, self.argument, scale)
    }
}

/// Even part, odd part and total of `e^{−scale}·Σ_{k=0}^{degree} t^k/k!`.
///
/// Each component carries `ln` of the largest magnitude that entered its evaluation, so that
/// cancellation can be detected.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SplitSum {
    pub even: Complex64,
    pub odd: Complex64,
    pub total: Complex64,
    pub ln_ref_even: f64,
    pub ln_ref_odd: f64,
    pub ln_ref_total: f64,
}

fn ln_factorial(k: usize) -> f64 {
    log_gamma(k as f64 + 1.0).expect("positive argument")
}

fn ln_norm(z: Complex64) -> f64 {
    z.norm().ln()
}

/// Splits `e^{−scale}·Σ_{k=0}^{degree} t^k/k!` into its even- and odd-index parts.
pub(crate) fn split_scaled_sum(degree: usize, t: Complex64, scale: Complex64) -> SplitSum {
    let zero = Complex64::new(0.0, 0.0);
    let a = t.norm();
    if a == 0.0 {
        let v = (-scale).exp();
        return SplitSum {
            even: v,
            odd: zero,
            total: v,
            ln_ref_even: -scale.re,
            ln_ref_odd: f64::NEG_INFINITY,
            ln_ref_total: -scale.re,
        };
    }
    let n = degree as f64;

    if a <= 0.5 * n {
        // Full exponential minus a rapidly decaying tail.
        let up = (t - scale).exp();
        let down = (-t - scale).exp();
        let k0 = degree + 1;
        let mut term = (k0 as f64 * t.ln() - ln_factorial(k0) - scale).exp();
        let mut tail_even = zero;
        let mut tail_odd = zero;
        let mut k = k0;
        loop {
            if k % 2 == 0 {
                tail_even += term;
            } else {
                tail_odd += term;
            }
            let mag = term.norm();
            if mag == 0.0 || mag <= 1e-18 * (tail_even.norm() + tail_odd.norm()) || k > k0 + 4000
            {
                break;
            }
            k += 1;
            term *= t / k as f64;
        }
        let ln_half = ln_norm(up).max(ln_norm(down)) - std::f64::consts::LN_2;
        let ln_tail = ln_norm(tail_even).max(ln_norm(tail_odd));
        return SplitSum {
            even: 0.5 * (up + down) - tail_even,
            odd: 0.5 * (up - down) - tail_odd,
            total: up - (tail_even + tail_odd),
            ln_ref_even: ln_half.max(ln_tail),
            ln_ref_odd: ln_half.max(ln_tail),
            ln_ref_total: ln_norm(up).max(ln_tail),
        };
    }

    // Direct summation of ratios relative to the largest term.
    let kstar = (a.floor() as usize).min(degree);
    let ln_ref = kstar as f64 * t.ln() - ln_factorial(kstar) - scale;
    let mut even = zero;
    let mut odd = zero;
    let mut add = |k: usize, r: Complex64| {
        if k % 2 == 0 {
            even += r;
        } else {
            odd += r;
        }
    };
    let one = Complex64::new(1.0, 0.0);
    add(kstar, one);
    let mut r = one;
    for k in (0..kstar).rev() {
        r *= (k + 1) as f64 / t;
        add(k, r);
    }
    let mut r = one;
    for k in (kstar + 1)..=degree {
        r *= t / k as f64;
        add(k, r);
    }
    let factor = ln_ref.exp();
    SplitSum {
        even: even * factor,
        odd: odd * factor,
        total: (even + odd) * factor,
        ln_ref_even: ln_ref.re,
        ln_ref_odd: ln_ref.re,
        ln_ref_total: ln_ref.re,
    }
}

fn flag(value: Complex64, ln_ref: f64) -> bool {
    let mag = value.norm();
    if ln_ref == f64::NEG_INFINITY {
        return false;
    }
    mag == 0.0 || mag.ln() < ln_ref + (1e-12_f64).ln()
}

/// `e^{−scale}·Σ_{k=0}^{degree} t^k/k!` for an arbitrary truncation degree.
pub fn scaled_exp_sum(degree: usize, t: Complex64, scale: Complex64) -> PartialExpValue {
    let s = split_scaled_sum(degree, t, scale);
    PartialExpValue {
        value: s.total,
        precision_loss: flag(s.total, s.ln_ref_total),
    }
}

/// Evaluates `e^{−scale}·(kind)_M(t)` where the polynomials have degree `2M − 2`.
///
/// `precision_loss` is set when the result is smaller than `1e−12` times the largest quantity
/// that was summed to obtain it.
///
/// ```
/// use ginibre::special::{scaled_partial_exp, PartialExpKind};
/// use num_complex::Complex64;
/// let t = Complex64::new(100.0, 0.0);
/// let v = scaled_partial_exp(PartialExpKind::Exp, 200, t, t).unwrap();
/// assert!((v.value.re - 1.0).abs() < 1e-6);
/// ```
pub fn scaled_partial_exp(
    kind: PartialExpKind,
    m: usize,
    t: Complex64,
    scale: Complex64,
) -> Result<PartialExpValue> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::Domain(format!(
            "truncation parameter M must lie in 1..={MAX_ORDER}, got {m}"
        )));
    }
    if !(t.re.is_finite() && t.im.is_finite() && scale.re.is_finite() && scale.im.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    let s = split_scaled_sum(2 * m - 2, t, scale);
    let (value, ln_ref) = match kind {
        PartialExpKind::Exp => (s.total, s.ln_ref_total),
        PartialExpKind::Cosh => (s.even, s.ln_ref_even),
        PartialExpKind::Sinh => (s.odd, s.ln_ref_odd),
    };
    Ok(PartialExpValue {
        value,
        precision_loss: flag(value, ln_ref),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::regularized_gamma_q;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn naive(kind: PartialExpKind, m: usize, t: Complex64) -> Complex64 {
        let mut sum = c(0.0, 0.0);
        let mut term = c(1.0, 0.0);
        for k in 0..=(2 * m - 2) {
            let keep = match kind {
                PartialExpKind::Exp => true,
                PartialExpKind::Cosh => k % 2 == 0,
                PartialExpKind::Sinh => k % 2 == 1,
            };
            if keep {
                sum += term;
            }
            term *= t / (k + 1) as f64;
        }
        sum
    }

    #[test]
    fn e1_is_one() {
        for t in [c(0.0, 0.0), c(3.0, -2.0), c(-50.0, 0.0)] {
            let v = scaled_partial_exp(PartialExpKind::Exp, 1, t, c(0.0, 0.0)).unwrap();
            assert_eq!(v.value, c(1.0, 0.0));
        }
    }

    #[test]
    fn zero_argument_is_exactly_one() {
        for m in [1, 7, 512] {
            let v = scaled_partial_exp(PartialExpKind::Exp, m, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            assert_eq!(v.value, c(1.0, 0.0));
        }
    }

    #[test]
    fn bulk_scaled_sum_tends_to_one() {
        let t = c(100.0, 0.0);
        let v = scaled_partial_exp(PartialExpKind::Exp, 200, t, t).unwrap();
        assert!((v.value - 1.0).norm() < 1e-6);
    }

    #[test]
    fn edge_value_equals_upper_incomplete_gamma() {
        // e^{−2M}e_M(2M) = Q(2M − 1, 2M); at M = 400 this is 0.481195…, not yet ½.
        let t = c(800.0, 0.0);
        let v = scaled_partial_exp(PartialExpKind::Exp, 400, t, t).unwrap();
        let q = regularized_gamma_q(799.0, 800.0).unwrap();
        assert!((v.value.re - q).abs() < 1e-12);
        assert!((v.value.re - 0.481_195_117_156_774_9).abs() < 1e-12);
    }

    #[test]
    fn edge_scaled_sum_tends_to_half_erfc() {
        // v = 1 + a/√(2M): e^{−2Mv} e_M(2Mv) → ½ erfc(a/√2), with shrinking deviation.
        for a in [-1.0, 0.0, 1.0] {
            let mut prev = f64::INFINITY;
            for m in [100, 200, 400] {
                let t = c(2.0 * m as f64 * (1.0 + a / (2.0 * m as f64).sqrt()), 0.0);
                let v = scaled_partial_exp(PartialExpKind::Exp, m, t, t).unwrap().value.re;
                let dev = (v - 0.5 * crate::special::erfc_real(a / std::f64::consts::SQRT_2)).abs();
                assert!(dev < prev, "a={a} M={m}: {dev}");
                prev = dev;
            }
            assert!(prev < 0.02, "a={a}: {prev}");
        }
    }

    #[test]
    fn matches_naive_sum_for_small_arguments() {
        let ts = [c(0.3, 0.0), c(-2.0, 1.0), c(4.0, -3.0), c(0.0, 7.5), c(-9.0, 0.0)];
        for m in [1, 2, 3, 8, 20] {
            for &t in &ts {
                for kind in [PartialExpKind::Exp, PartialExpKind::Cosh, PartialExpKind::Sinh] {
                    let want = naive(kind, m, t);
                    let got = scaled_partial_exp(kind, m, t, c(0.0, 0.0)).unwrap().value;
                    let tol = 1e-13 * (t.norm().exp()).max(1.0);
                    assert!((got - want).norm() <= tol, "m={m} t={t} {kind:?}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn flags_cancellation() {
        // cos(20.5π) = 0, so c_M(20.5πi) cancels down to roundoff.
        let t = c(0.0, 20.5 * std::f64::consts::PI);
        let v = scaled_partial_exp(PartialExpKind::Cosh, 126, t, c(0.0, 0.0)).unwrap();
        assert!(v.precision_loss);
        let v = scaled_partial_exp(PartialExpKind::Exp, 40, c(20.0, 0.0), c(20.0, 0.0)).unwrap();
        assert!(!v.precision_loss);
    }

    #[test]
    fn small_exponential_without_cancellation() {
        let v = scaled_partial_exp(PartialExpKind::Exp, 100, c(-30.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(((v.value.re - (-30.0_f64).exp()) / (-30.0_f64).exp()).abs() < 1e-12);
        assert!(!v.precision_loss);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(scaled_partial_exp(PartialExpKind::Exp, 0, c(1.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(scaled_partial_exp(PartialExpKind::Exp, 513, c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn arbitrary_degree_sum() {
        let v = scaled_exp_sum(15, c(16.0, 0.0), c(16.0, 0.0));
        let q = regularized_gamma_q(16.0, 16.0).unwrap();
        assert!((v.value.re - q).abs() < 1e-14);
    }
}
