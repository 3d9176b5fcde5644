use num_complex::Complex64;

use super::{c, ln_root_erfc, HALF_LN_2PI, I};
use crate::error::{Error, Result};
use crate::kernel::{KernelBlock, Point};
use crate::quadrature::{integrate, Tolerance};
use crate::special::{erfc_complex, erfc_real, sgn};

/// `ln(1/(2√(2π)))`.
const LN_HALF_INV_SQRT_2PI: f64 = -(HALF_LN_2PI + std::f64::consts::LN_2);
/// `1/(4√π)`.
const FRAC_1_4_SQRT_PI: f64 = 0.141_047_395_886_939_07;

/// `Φ(y) = ½ erfc(−y/√2)`, the standard normal distribution function.
fn normal_cdf(y: f64) -> f64 {
    0.5 * erfc_real(-y / std::f64::consts::SQRT_2)
}

/// `F(r, r') = ∫_{−∞}^{r−r'} φ(a) Φ(−a − 2r') da` with `φ` the standard normal density.
fn edge_mass(r: f64, rp: f64) -> Result<f64> {
    let upper = r - rp;
    let lower = -40.0_f64;
    if upper <= lower {
        return Ok(0.0);
    }
    let f = |a: f64| (-0.5 * a * a - HALF_LN_2PI).exp() * normal_cdf(-a - 2.0 * rp);
    Ok(integrate(f, lower, upper, Tolerance::new(1e-16, 1e-14))?.value)
}

/// `IS_edge(r, r') + ½ sgn(r − r')` at `u = 1`.
///
/// This is `½ sgn(r − r') + ½[∫_r^∞ − ∫_{−∞}^r] S_edge(t, r') dt + erfc(−r')/8`, the
/// antiderivative that vanishes on the diagonal.
fn is_plus_e_right(r: f64, rp: f64) -> Result<f64> {
    Ok(0.5 * sgn(r - rp) + 0.25 * erfc_real(rp) - edge_mass(r, rp)?
        + 0.125 * erfc_real(r) * erfc_real(-rp))
}

fn real_real(u: f64, r: f64, rp: f64) -> Result<KernelBlock> {
    let d = r - rp;
    let g = (-0.5 * d * d + LN_HALF_INV_SQRT_2PI).exp() * erfc_real(u * (r + rp) / std::f64::consts::SQRT_2);
    let tail = |a: f64, b: f64| FRAC_1_4_SQRT_PI * (-a * a).exp() * erfc_real(-u * b);
    let is = if r == rp {
        0.0
    } else if u > 0.0 {
        is_plus_e_right(r, rp)?
    } else {
        -is_plus_e_right(-r, -rp)?
    };
    Ok(KernelBlock::new(c((rp - r) * g), c(g + tail(r, rp)), c(g + tail(rp, r)), c(is)))
}

/// `exp(exponent + ln_w)·erfc(u·arg/√2)`.
fn gaussian_erfc(exponent: Complex64, ln_w: f64, u: f64, arg: Complex64) -> Result<Complex64> {
    let e = erfc_complex(u * arg / std::f64::consts::SQRT_2)?;
    Ok((exponent + ln_w).exp() * e)
}

fn complex_complex(u: f64, s: Complex64, sp: Complex64) -> Result<KernelBlock> {
    let w = ln_root_erfc(s) + ln_root_erfc(sp) + LN_HALF_INV_SQRT_2PI;
    let (sb, spb) = (s.conj(), sp.conj());
    let half_sq = |a: Complex64, b: Complex64| -0.5 * (a - b) * (a - b);
    let s_entry = I * (spb - s) * gaussian_erfc(half_sq(s, spb), w, u, s + spb)?;
    let s_swapped = I * (sb - sp) * gaussian_erfc(half_sq(sp, sb), w, u, sp + sb)?;
    let ds = (sp - s) * gaussian_erfc(half_sq(s, sp), w, u, s + sp)?;
    let is = -(spb - sb) * gaussian_erfc(half_sq(sb, spb), w, u, sb + spb)?;
    Ok(KernelBlock::new(ds, s_entry, s_swapped, is))
}

fn real_complex(u: f64, r: f64, s: Complex64) -> Result<KernelBlock> {
    let root = ln_root_erfc(s);
    let w = root + LN_HALF_INV_SQRT_2PI;
    let (rc, sb) = (c(r), s.conj());
    let bar = gaussian_erfc(-0.5 * (rc - sb) * (rc - sb), w, u, rc + sb)?;
    let plain = gaussian_erfc(-0.5 * (rc - s) * (rc - s), w, u, rc + s)?;
    let tail = |z: Complex64| FRAC_1_4_SQRT_PI * erfc_real(-u * r) * (-z * z + root).exp();
    Ok(KernelBlock::new(
        (s - rc) * plain,
        I * (sb - rc) * bar,
        plain + tail(s),
        -I * bar - I * tail(sb),
    ))
}

/// The limiting kernel at the real edge `u = ±1`, in the local coordinate `γ = z − u√(2M)`.
///
/// The real/real `IS` entry includes `E` and is the antiderivative of `S_edge` that makes
/// the block antisymmetric; the `e^{−s²}` terms carry the weight `√erfc(√2 Im s)` of the
/// complex point. At `u = −1` the kernel is the image of the `u = 1` kernel under `γ ↦ −γ̄`.
///
/// ```
/// use ginibre::limits::limit_kernel_real_edge;
/// use ginibre::kernel::Point;
/// use std::f64::consts::PI;
/// let k = limit_kernel_real_edge(1.0, Point::Real(0.0), Point::Real(0.0)).unwrap();
/// let want = 1.0 / (2.0 * (2.0 * PI).sqrt()) + 1.0 / (4.0 * PI.sqrt());
/// assert!((k.s.re - want).abs() < 1e-15);
/// ```
pub fn limit_kernel_real_edge(u: f64, g: Point, g2: Point) -> Result<KernelBlock> {
    if u != 1.0 && u != -1.0 {
        return Err(Error::InvalidRegime(format!("real edge needs u = ±1, got {u}")));
    }
    match (g, g2) {
        (Point::Real(r), Point::Real(rp)) => real_real(u, r, rp),
        (Point::Complex(s), Point::Complex(sp)) => complex_complex(u, s, sp),
        (Point::Real(r), Point::Complex(s)) => real_complex(u, r, s),
        (Point::Complex(s), Point::Real(r)) => Ok(real_complex(u, r, s)?.swapped()),
    }
}
