//! Complementary error function on the real line and in the complex plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const SMALL: f64 = 0.46875;
const BIG: f64 = 26.543;

const A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302,
    3_209.377_589_138_469_5,
    0.185_777_706_184_603_15,
];
const B: [f64; 4] = [
    23.601_290_952_344_12,
    244.024_637_934_444_17,
    1_282.616_526_077_372_3,
    2_844.236_833_439_171,
];
const C: [f64; 9] = [
    0.564_188_496_988_670_1,
    8.883_149_794_388_376,
    66.119_190_637_141_63,
    298.635_138_197_400_1,
    881.952_221_241_769,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_6,
    1_230.339_354_797_997_2,
    2.153_115_354_744_038_5e-8,
];
const D: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_9,
    1_621.389_574_566_690_2,
    3_290.799_235_733_459_6,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_4,
];
const P: [f64; 6] = [
    0.305_326_634_961_232_36,
    0.360_344_899_949_804_45,
    0.125_781_726_111_229_24,
    0.016_083_785_148_742_275,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_097,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    0.527_905_102_951_428_4,
    0.060_518_341_312_441_32,
    0.002_335_204_976_268_691_8,
];

fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let num = (((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3];
    let den = (((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3];
    x * num / den
}

/// `exp(y²)·erfc(y)` for `y > SMALL`.
fn erfcx_large(y: f64) -> f64 {
    if y <= 4.0 {
        let mut num = C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + C[i]) * y;
            den = (den + D[i]) * y;
        }
        (num + C[7]) / (den + D[7])
    } else {
        let z = 1.0 / (y * y);
        let mut num = P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + P[i]) * z;
            den = (den + Q[i]) * z;
        }
        let r = z * (num + P[4]) / (den + Q[4]);
        (FRAC_1_SQRT_PI - r) / y
    }
}

/// `exp(-y²)` evaluated as a product of two factors to avoid the rounding error in `y²`.
fn exp_neg_square(y: f64) -> f64 {
    let head = (y * 16.0).trunc() / 16.0;
    (-head * head).exp() * (-(y - head) * (y + head)).exp()
}

/// Complementary error function of a real argument.
///
/// ```
/// use ginibre::special::erfc_real;
/// assert_eq!(erfc_real(0.0), 1.0);
/// assert!((erfc_real(-1.0) - (2.0 - erfc_real(1.0))).abs() < 1e-16);
/// ```
pub fn erfc_real(x: f64) -> f64 {
    let y = x.abs();
    if y <= SMALL {
        return 1.0 - erf_small(x);
    }
    let tail = if y >= BIG {
        0.0
    } else {
        erfcx_large(y) * exp_neg_square(y)
    };
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

/// Scaled complementary error function `exp(x²)·erfc(x)`.
///
/// Returns `+∞` once the result exceeds the double range (x below about −26.6).
pub fn erfcx_real(x: f64) -> f64 {
    let y = x.abs();
    if y <= SMALL {
        return (y * y).exp() * (1.0 - erf_small(x));
    }
    let r = erfcx_large(y);
    if x < 0.0 {
        let head = (y * 16.0).trunc() / 16.0;
        let grow = (head * head).exp() * ((y - head) * (y + head)).exp();
        2.0 * grow - r
    } else {
        r
    }
}

/// Natural logarithm of `erfc(x)`, finite for every finite `x`.
pub fn ln_erfc_real(x: f64) -> f64 {
    if x > SMALL {
        erfcx_large(x).ln() - x * x
    } else {
        erfc_real(x).ln()
    }
}

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Faddeeva function `w(z) = exp(-z²)·erfc(-iz)` for `Im z ≥ 0`.
fn faddeeva_upper(x: f64, y: f64) -> Complex64 {
    debug_assert!(y >= 0.0);
    let xa = x.abs();
    let xs = xa / 6.3;
    let ys = y / 4.4;
    let rho2 = xs * xs + ys * ys;
    let xquad = xa * xa - y * y;
    let yquad = 2.0 * xa * y;

    let (mut re, mut im);
    if rho2 < 0.085_264 {
        // Power series of exp(z²)·erf(iz)-type about the origin.
        let rho = (1.0 - 0.85 * ys) * rho2.sqrt();
        let n = (6.0 + 72.0 * rho).round() as i32;
        let mut j = 2 * n + 1;
        let mut sx = 1.0 / f64::from(j);
        let mut sy = 0.0;
        for i in (1..=n).rev() {
            j -= 2;
            let fi = f64::from(i);
            let t = (sx * xquad - sy * yquad) / fi;
            sy = (sx * yquad + sy * xquad) / fi;
            sx = t + 1.0 / f64::from(j);
        }
        let u1 = -TWO_OVER_SQRT_PI * (sx * y + sy * xa) + 1.0;
        let v1 = TWO_OVER_SQRT_PI * (sx * xa - sy * y);
        let e = (-xquad).exp();
        let u2 = e * yquad.cos();
        let v2 = -e * yquad.sin();
        re = u1 * u2 - v1 * v2;
        im = u1 * v2 + v1 * u2;
    } else {
        // Laplace continued fraction, with Taylor-accelerated truncation inside the unit ellipse.
        let (h, kapn, nu) = if rho2 > 1.0 {
            let rho = rho2.sqrt();
            (0.0, 0, (3.0 + 1442.0 / (26.0 * rho + 77.0)) as i32)
        } else {
            let rho = (1.0 - ys) * (1.0 - rho2).sqrt();
            (
                1.88 * rho,
                (7.0 + 34.0 * rho).round() as i32,
                (16.0 + 26.0 * rho).round() as i32,
            )
        };
        let h2 = 2.0 * h;
        let mut lambda = if h > 0.0 { h2.powi(kapn) } else { 0.0 };
        let (mut rx, mut ry, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0);
        for n in (0..=nu).rev() {
            let np1 = f64::from(n + 1);
            let tx = y + h + np1 * rx;
            let ty = xa - np1 * ry;
            let c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if h > 0.0 && n <= kapn {
                let t = lambda + sx;
                sx = rx * t - ry * sy;
                sy = ry * t + rx * sy;
                lambda /= h2;
            }
        }
        if h == 0.0 {
            re = TWO_OVER_SQRT_PI * rx;
            im = TWO_OVER_SQRT_PI * ry;
        } else {
            re = TWO_OVER_SQRT_PI * sx;
            im = TWO_OVER_SQRT_PI * sy;
        }
        if y == 0.0 {
            re = (-xa * xa).exp();
        }
    }
    if x < 0.0 {
        im = -im;
    }
    Complex64::new(re, im)
}

/// Complementary error function of a complex argument.
///
/// For `Re w ≥ 0` this is `exp(-w²)·w(iw)` with the Faddeeva function evaluated in the
/// upper half plane; otherwise the reflection `erfc(w) = 2 − erfc(−w)` is used.
///
/// Returns [`Error::OverflowDomain`] when `exp(-w²)` is not representable.
///
/// ```
/// use ginibre::special::erfc_complex;
/// use num_complex::Complex64;
/// let v = erfc_complex(Complex64::new(0.0, 0.0)).unwrap();
/// assert_eq!(v, Complex64::new(1.0, 0.0));
/// ```
pub fn erfc_complex(w: Complex64) -> Result<Complex64> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Domain(format!("erfc of non-finite argument {w}")));
    }
    if w.im == 0.0 {
        return Ok(Complex64::new(erfc_real(w.re), 0.0));
    }
    let z = if w.re >= 0.0 { w } else { -w };
    let exponent = -(z * z);
    if exponent.re > 709.0 {
        return Err(Error::OverflowDomain(format!(
            "exp(-w^2) overflows at w = {w}"
        )));
    }
    // iz has imaginary part Re z ≥ 0.
    let iz = Complex64::new(-z.im, z.re);
    let value = exponent.exp() * faddeeva_upper(iz.re, iz.im);
    if w.re >= 0.0 {
        Ok(value)
    } else {
        Ok(Complex64::new(2.0, 0.0) - value)
    }
}

/// Faddeeva function `w(z) = exp(-z²)·erfc(-iz)` on the closed upper half plane.
///
/// Used where the scaled form avoids overflow of `exp(-z²)`.
pub fn faddeeva(z: Complex64) -> Result<Complex64> {
    if z.im < 0.0 {
        return Err(Error::Domain(
            "faddeeva is exposed on the closed upper half plane only".into(),
        ));
    }
    Ok(faddeeva_upper(z.re, z.im))
}
