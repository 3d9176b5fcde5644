//! Brute-force reference values from the partial joint densities `Ω_{L,M}`, by direct
//! integration and without any Pfaffian machinery. Sizes `N = 2` and `N = 4` only.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::correlation::SpectralConfiguration;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breakpoints, Tolerance};
use crate::special::erfcx_real;

/// Coordinates beyond this magnitude carry weight below `1e−14`.
pub const ORACLE_CUTOFF: f64 = 8.0;

/// The eigenvalue weight of the real Ginibre ensemble: `e^{−x²/2}` on the line and
/// `ρ(β)ρ(β̄) = e^{y² − x²} erfc(√2|y|)` at `β = x + iy` off it.
fn weight(g: Complex64) -> f64 {
    if g.im == 0.0 {
        (-0.5 * g.re * g.re).exp()
    } else {
        let y = g.im.abs();
        (-g.re * g.re - y * y).exp() * erfcx_real(std::f64::consts::SQRT_2 * y)
    }
}

/// `|Δ(γ)|`, the modulus of the Vandermonde determinant, as the product of pairwise distances.
fn vandermonde_abs(g: &[Complex64]) -> f64 {
    let mut p = 1.0;
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            p *= (g[j] - g[i]).norm();
        }
    }
    p
}

/// The partial joint density
/// `Ω_{L,M}(α, β) = 2^M Π w(α_ℓ) Π w(β_m) |Δ(α_1, …, α_L, β_1, β̄_1, …, β_M, β̄_M)|`.
///
/// ```
/// use ginibre::oracle::omega;
/// let v = omega(&[1.0, 0.0], &[]).unwrap();
/// assert!((v - (-0.5_f64).exp()).abs() < 1e-16);
/// ```
pub fn omega(alphas: &[f64], betas: &[Complex64]) -> Result<f64> {
    let n = alphas.len() + 2 * betas.len();
    if n == 0 || n > 4 {
        return Err(Error::Domain(format!("the oracle supports 1 <= N <= 4, got {n}")));
    }
    let mut pts: Vec<Complex64> = alphas.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    let mut w: f64 = alphas.iter().map(|&a| weight(Complex64::new(a, 0.0))).product();
    for &b in betas {
        pts.push(b);
        pts.push(b.conj());
        w *= if b.im == 0.0 { 0.0 } else { weight(b) };
    }
    Ok(2f64.powi(betas.len() as i32) * w * vandermonde_abs(&pts))
}

/// A sector `(L, M)` of the partial joint density with `L + 2M = N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialDensity {
    pub l: usize,
    pub m: usize,
}

impl PartialDensity {
    pub fn new(l: usize, m: usize) -> Self {
        Self { l, m }
    }

    pub fn n(&self) -> usize {
        self.l + 2 * self.m
    }

    pub fn eval(&self, alphas: &[f64], betas: &[Complex64]) -> Result<f64> {
        if alphas.len() != self.l || betas.len() != self.m {
            return Err(Error::Dimension(format!(
                "sector ({}, {}) got {} reals and {} complex points",
                self.l,
                self.m,
                alphas.len(),
                betas.len()
            )));
        }
        omega(alphas, betas)
    }

    /// The mass `(1/(L! M! 2^M)) ∫_{ℝ^L × ℂ^M} Ω_{L,M}` of this sector.
    ///
    /// The integrand is symmetric in the reals and in each `β ↦ β̄`, so the integral is taken
    /// over ordered reals `α_1 < … < α_L` and `Im β > 0` and multiplied by `L! 2^M`, which
    /// leaves `(1/M!) ∫ Ω`. On that region `|Δ|` has no kinks.
    pub fn mass(&self, tol: Tolerance) -> Result<f64> {
        let (l, m) = (self.l, self.m);
        let dim = l + 2 * m;
        let mut coords = vec![0.0; dim];
        let value = nested(0, &mut coords, l, tol, &mut |c: &[f64]| {
            let alphas = &c[..l];
            let betas: Vec<Complex64> = (0..m).map(|k| Complex64::new(c[l + 2 * k], c[l + 2 * k + 1])).collect();
            omega(alphas, &betas).unwrap_or(0.0)
        })?;
        Ok(value / factorial(m))
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Integrates over coordinates `level..` given the earlier ones: reals ordered increasingly
/// in `[−8, 8]`, complex real parts in `[−8, 8]`, imaginary parts in `(0, 8]`.
fn nested(
    level: usize,
    coords: &mut Vec<f64>,
    l: usize,
    tol: Tolerance,
    f: &mut dyn FnMut(&[f64]) -> f64,
) -> Result<f64> {
    if level == coords.len() {
        return Ok(f(coords));
    }
    let lo = if level < l {
        if level == 0 {
            -ORACLE_CUTOFF
        } else {
            coords[level - 1]
        }
    } else if (level - l) % 2 == 1 {
        0.0
    } else {
        -ORACLE_CUTOFF
    };
    let hi = ORACLE_CUTOFF;
    if hi <= lo {
        return Ok(0.0);
    }
    let mut err = None;
    let q = {
        let mut g = |x: f64| {
            coords[level] = x;
            match nested(level + 1, coords, l, tol, f) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        };
        integrate(&mut g, lo, hi, tol)?
    };
    if let Some(e) = err {
        return Err(e);
    }
    Ok(q.value)
}

/// The sectors `(L, M)` with `L + 2M = N`.
pub fn sectors(n: usize) -> Vec<PartialDensity> {
    (0..=n / 2).filter(|m| n >= 2 * m).map(|m| PartialDensity::new(n - 2 * m, m)).collect()
}

fn oracle_tolerance(n: usize) -> Tolerance {
    if n <= 2 {
        Tolerance::new(1e-13, 1e-11)
    } else {
        Tolerance::new(1e-8, 1e-5)
    }
}

/// `Z = Σ_{L+2M=N} (1/(L! M! 2^M)) ∫ Ω_{L,M}` by nested adaptive quadrature.
///
/// ```no_run
/// use ginibre::oracle::partition_oracle;
/// let z = partition_oracle(2).unwrap();
/// assert!((z - 2.0 * (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-6);
/// ```
pub fn partition_oracle(n: usize) -> Result<f64> {
    if n != 2 && n != 4 {
        return Err(Error::Domain(format!("partition oracle supports N = 2 or 4, got {n}")));
    }
    let tol = oracle_tolerance(n);
    sectors(n).par_iter().map(|s| s.mass(tol)).sum()
}

/// The mass of one sector, `P_{L,M}(X_{L,M})` before normalization by `Z`.
pub fn sector_mass(l: usize, m: usize) -> Result<f64> {
    let s = PartialDensity::new(l, m);
    if s.n() != 2 && s.n() != 4 {
        return Err(Error::Domain(format!("sector ({l}, {m}) is not of size 2 or 4")));
    }
    s.mass(oracle_tolerance(s.n()))
}

/// `R_{ℓ,m}(x, z)` for `N = 2` from its defining integral over the remaining coordinates.
///
/// Supported orders are `(1, 0)`, `(2, 0)` and `(0, 1)`.
pub fn correlation_oracle(n: usize, cfg: &SpectralConfiguration) -> Result<f64> {
    if n != 2 {
        return Err(Error::Domain(format!("correlation oracle supports N = 2, got {n}")));
    }
    let z = partition_oracle(2)?;
    let (l, m) = cfg.order();
    match (l, m) {
        (2, 0) => Ok(omega(&cfg.reals, &[])? / z),
        (0, 1) => {
            let b = cfg.uppers[0];
            if b.im <= 0.0 {
                return Err(Error::LowerHalfPlane { re: b.re, im: b.im });
            }
            Ok(omega(&[], &[b])? / z)
        }
        (1, 0) => {
            let x = cfg.reals[0];
            let tol = oracle_tolerance(2);
            let f = |a: f64| omega(&[x, a], &[]).unwrap_or(0.0);
            let kink = x.clamp(-ORACLE_CUTOFF, ORACLE_CUTOFF);
            let q = integrate_with_breakpoints(f, &[-ORACLE_CUTOFF, kink, ORACLE_CUTOFF], tol)?;
            Ok(q.value / z)
        }
        _ => Err(Error::Domain(format!("correlation oracle supports (1,0), (2,0), (0,1); got ({l},{m})"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn repeated_reals_vanish() {
        assert_eq!(omega(&[0.3, 0.3], &[]).unwrap(), 0.0);
    }

    #[test]
    fn real_beta_vanishes() {
        assert_eq!(omega(&[], &[Complex64::new(0.4, 0.0)]).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_within_blocks() {
        let a = omega(&[0.2, -1.0], &[Complex64::new(0.3, 0.5)]).unwrap();
        let b = omega(&[-1.0, 0.2], &[Complex64::new(0.3, -0.5)]).unwrap();
        assert!((a - b).abs() < 1e-15 * a);
    }

    #[test]
    fn two_by_two_sectors() {
        // Real sector: ½∫∫ e^{−(a²+b²)/2}|a − b| = 2√π; the total is 2√(2π).
        let real = sector_mass(2, 0).unwrap();
        assert!((real - 2.0 * PI.sqrt()).abs() < 1e-9, "{real}");
        let total = partition_oracle(2).unwrap();
        assert!((total - 2.0 * (2.0 * PI).sqrt()).abs() < 1e-8, "{total}");
        assert!(real < total);
    }

    #[test]
    fn eq3_and_eq8_bookkeeping_for_one_pair() {
        // (1/(L!M!2^M))∫_ℂ 2^M w|Δ| equals ∫_H of the unnormalized density with the 2^M kept.
        let direct = {
            let f = |y: f64| {
                let g = |x: f64| omega(&[], &[Complex64::new(x, y)]).unwrap();
                integrate(g, -8.0, 8.0, Tolerance::new(1e-13, 1e-11)).unwrap().value
            };
            integrate(f, 0.0, 8.0, Tolerance::new(1e-13, 1e-11)).unwrap().value
        };
        assert!((sector_mass(0, 1).unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_the_pfaffian_path() {
        use crate::correlation::correlation;
        use crate::limits::KernelRegime;
        let regime = KernelRegime::FiniteN { m: 1 };
        let cases = [
            SpectralConfiguration::reals(&[0.5, -0.5]),
            SpectralConfiguration::reals(&[0.0]),
            SpectralConfiguration::reals(&[1.7]),
            SpectralConfiguration::uppers(&[Complex64::new(0.0, 1.0)]),
            SpectralConfiguration::uppers(&[Complex64::new(-0.8, 0.3)]),
        ];
        for cfg in cases {
            let o = correlation_oracle(2, &cfg).unwrap();
            let p = correlation(regime, &cfg).unwrap();
            assert!((o - p).abs() <= 1e-6 * p.abs(), "{cfg:?}: {o} vs {p}");
        }
    }

    #[test]
    fn four_by_four_partition() {
        let unit = 2.0 * (2.0 * PI).sqrt();
        let want = unit * unit * 2.0;
        let z = partition_oracle(4).unwrap();
        assert!((z / want - 1.0).abs() < 1e-3, "{z} vs {want}");
    }

    #[test]
    fn mean_real_count_for_two_by_two() {
        let z = partition_oracle(2).unwrap();
        let expected_reals = 2.0 * sector_mass(2, 0).unwrap() / z;
        assert!((expected_reals - 2f64.sqrt()).abs() < 1e-9);
    }
}
