use num_complex::Complex64;

use super::{check_order, e_term, ln_factorial, GinibreWeight, KernelBlock, Point, FRAC_1_SQRT_2PI};
use crate::error::Result;
use crate::special::{ln_lower_gamma, sgn};

/// Largest `M` accepted by [`kernel_skew_sum`].
pub const SKEW_SUM_MAX_ORDER: usize = 60;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `π̃_n(γ)/√((2m)!)` and `ε π̃_n(γ)/√((2m)!)` for `n = 2m, 2m+1`, `m < M`.
struct Tables {
    even: Vec<Complex64>,
    odd: Vec<Complex64>,
    eps_even: Vec<Complex64>,
    eps_odd: Vec<Complex64>,
}

/// `exp(ln_scale)·γ^{power}`, exactly `0` or `1` at `γ = 0`.
fn scaled_power(g: Complex64, power: usize, ln_scale: f64) -> Complex64 {
    if power == 0 {
        return Complex64::new(ln_scale.exp(), 0.0);
    }
    if g == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    (Complex64::new(ln_scale, 0.0) + power as f64 * g.ln()).exp()
}

/// `π̃_{2m}(γ)/√((2m)!)` and `π̃_{2m+1}(γ)/√((2m)!)`, where `π̃_n = φ·π_n`.
fn polynomial_values(m: usize, g: Complex64) -> (Complex64, Complex64) {
    let ln_phi = GinibreWeight.ln_value(g);
    let ln_norm = ln_phi - 0.5 * ln_factorial(2 * m);
    let even = scaled_power(g, 2 * m, ln_norm);
    let odd = if m == 0 {
        scaled_power(g, 1, ln_norm)
    } else {
        scaled_power(g, 2 * m - 1, ln_norm) * (g * g - 2.0 * m as f64)
    };
    (even, odd)
}

fn tables(order: usize, p: Point) -> Result<Tables> {
    let mut t = Tables {
        even: Vec::with_capacity(order),
        odd: Vec::with_capacity(order),
        eps_even: Vec::with_capacity(order),
        eps_odd: Vec::with_capacity(order),
    };
    for m in 0..order {
        match p {
            Point::Real(x) => {
                let g = Complex64::new(x, 0.0);
                let (e, o) = polynomial_values(m, g);
                t.even.push(e);
                t.odd.push(o);
                // ε π̃_{2m}(x) = −2^{m−½} sgn(x) γ(m+½, x²/2)
                let eps_e = if x == 0.0 {
                    0.0
                } else {
                    -sgn(x)
                        * ((m as f64 - 0.5) * std::f64::consts::LN_2
                            + ln_lower_gamma(m as f64 + 0.5, 0.5 * x * x)?
                            - 0.5 * ln_factorial(2 * m))
                        .exp()
                };
                t.eps_even.push(Complex64::new(eps_e, 0.0));
                // ε π̃_{2m+1}(x) = x^{2m} e^{−x²/2}
                t.eps_odd.push(e);
            }
            Point::Complex(z) => {
                let (e, o) = polynomial_values(m, z);
                let (eb, ob) = polynomial_values(m, z.conj());
                t.even.push(e);
                t.odd.push(o);
                // ε π̃_n(z) = i π̃_n(z̄)
                t.eps_even.push(I * eb);
                t.eps_odd.push(I * ob);
            }
        }
    }
    Ok(t)
}

/// The ungauged kernel block `K_{2M}(γ, γ')` by direct summation over the skew-orthogonal
/// polynomials `π_{2m}`, `π_{2m+1}`, `m < M`.
///
/// Agrees with [`kernel_closed_form`](super::kernel_closed_form) on real points and up to the
/// unimodular gauge `ψ(z) = e^{(z² − z̄²)/4}` elsewhere.
///
/// ```
/// use ginibre::kernel::{kernel_closed_form, kernel_skew_sum, Point};
/// let a = kernel_skew_sum(3, Point::Real(0.3), Point::Real(-0.2)).unwrap();
/// let b = kernel_closed_form(3, Point::Real(0.3), Point::Real(-0.2)).unwrap();
/// assert!(a.distance(&b) < 1e-13);
/// ```
pub fn kernel_skew_sum(order: usize, g: Point, g2: Point) -> Result<KernelBlock> {
    check_order(order, SKEW_SUM_MAX_ORDER)?;
    let a = tables(order, g)?;
    let b = tables(order, g2)?;
    let zero = Complex64::new(0.0, 0.0);
    let (mut s, mut s_swapped, mut ds, mut is) = (zero, zero, zero, zero);
    for m in 0..order {
        s += a.even[m] * b.eps_odd[m] - a.odd[m] * b.eps_even[m];
        s_swapped += b.even[m] * a.eps_odd[m] - b.odd[m] * a.eps_even[m];
        ds += a.even[m] * b.odd[m] - a.odd[m] * b.even[m];
        is += a.eps_even[m] * b.eps_odd[m] - a.eps_odd[m] * b.eps_even[m];
    }
    let e = e_term(g, g2);
    Ok(KernelBlock::new(
        FRAC_1_SQRT_2PI * ds,
        FRAC_1_SQRT_2PI * s,
        FRAC_1_SQRT_2PI * s_swapped,
        FRAC_1_SQRT_2PI * is + e,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_closed_form;

    fn cplx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn psi(z: Complex64) -> Complex64 {
        ((z * z - z.conj() * z.conj()) / 4.0).exp()
    }

    #[test]
    fn real_points_agree_entrywise() {
        for m in [1, 2, 5, 20] {
            for (x, y) in [(0.3, -0.2), (1.7, 0.9), (-2.5, 2.1), (0.0, 0.6)] {
                let a = kernel_skew_sum(m, Point::Real(x), Point::Real(y)).unwrap();
                let b = kernel_closed_form(m, Point::Real(x), Point::Real(y)).unwrap();
                assert!(a.distance(&b) < 1e-12, "m={m} ({x},{y}): {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn gauge_relates_the_two_paths() {
        // K = diag(ψ(γ), ψ(γ̄)) K̃ diag(ψ(γ'), ψ(γ̄'))
        let pts = [Point::Real(0.7), Point::Complex(cplx(0.2, 0.9)), Point::Complex(cplx(-0.6, 0.4))];
        for m in [1, 4, 12] {
            for &a in &pts {
                for &b in &pts {
                    let raw = kernel_skew_sum(m, a, b).unwrap().matrix();
                    let tilde = kernel_closed_form(m, a, b).unwrap().matrix();
                    let (ga, gb) = (a.value(), b.value());
                    let da = nalgebra::Matrix2::new(psi(ga), cplx(0.0, 0.0), cplx(0.0, 0.0), psi(ga.conj()));
                    let db = nalgebra::Matrix2::new(psi(gb), cplx(0.0, 0.0), cplx(0.0, 0.0), psi(gb.conj()));
                    let gauged = da * tilde * db;
                    let diff = (raw - gauged).iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
                    assert!(diff < 1e-12, "m={m} {a:?} {b:?}: {diff}");
                }
            }
        }
    }

    #[test]
    fn rejects_large_order() {
        assert!(kernel_skew_sum(61, Point::Real(0.0), Point::Real(1.0)).is_err());
    }
}
