use num_complex::Complex64;

use super::{c, ln_root_erfc, HALF_LN_2PI, I};
use crate::kernel::{KernelBlock, Point};
use crate::special::erfc_real;

/// `(prefactor)·exp(exponent + ln_w)`, computed as one exponential.
fn weighted(prefactor: Complex64, exponent: Complex64, ln_w: f64) -> Complex64 {
    prefactor * (exponent + ln_w).exp()
}

fn real_real(x: f64, xp: f64) -> KernelBlock {
    let d = x - xp;
    let g = (-0.5 * d * d - HALF_LN_2PI).exp();
    let is = 0.5 * crate::special::sgn(d) * erfc_real(d.abs() / std::f64::consts::SQRT_2);
    KernelBlock::new(c((xp - x) * g), c(g), c(g), c(is))
}

fn complex_complex(z: Complex64, zp: Complex64) -> KernelBlock {
    let w = ln_root_erfc(z) + ln_root_erfc(zp) - HALF_LN_2PI;
    let (zb, zpb) = (z.conj(), zp.conj());
    let ds = weighted(zp - z, -0.5 * (z - zp) * (z - zp), w);
    let s = weighted(I * (zpb - z), -0.5 * (z - zpb) * (z - zpb), w);
    let s_swapped = weighted(I * (zb - zp), -0.5 * (zp - zb) * (zp - zb), w);
    let is = weighted(-(zpb - zb), -0.5 * (zb - zpb) * (zb - zpb), w);
    KernelBlock::new(ds, s, s_swapped, is)
}

fn real_complex(x: f64, z: Complex64) -> KernelBlock {
    let w = ln_root_erfc(z) - HALF_LN_2PI;
    let (xc, zb) = (c(x), z.conj());
    let plain = -0.5 * (xc - z) * (xc - z);
    let bar = -0.5 * (xc - zb) * (xc - zb);
    KernelBlock::new(
        weighted(z - xc, plain, w),
        weighted(I * (zb - xc), bar, w),
        weighted(c(1.0), plain, w),
        weighted(-I, bar, w),
    )
}

/// The limiting kernel `K = lim K̃_{2M}` at the origin, which is also the real-bulk limit.
///
/// The real/real `IS` entry already contains `E`: it is `½ sgn(x − x') erfc(|x − x'|/√2)`.
///
/// ```
/// use ginibre::limits::limit_kernel_origin;
/// use ginibre::kernel::Point;
/// let k = limit_kernel_origin(Point::Real(1.0), Point::Real(0.0));
/// let want = 0.5 * ginibre::special::erfc_real(1.0 / 2f64.sqrt());
/// assert!((k.is_plus_e.re - want).abs() < 1e-15);
/// ```
pub fn limit_kernel_origin(g: Point, g2: Point) -> KernelBlock {
    match (g, g2) {
        (Point::Real(x), Point::Real(xp)) => real_real(x, xp),
        (Point::Complex(z), Point::Complex(zp)) => complex_complex(z, zp),
        (Point::Real(x), Point::Complex(z)) => real_complex(x, z),
        (Point::Complex(z), Point::Real(x)) => real_complex(x, z).swapped(),
    }
}
