use num_complex::Complex64;

use super::KernelRegime;
use crate::correlation::{correlation, SpectralConfiguration};
use crate::error::{Error, Result};
use crate::kernel::{kernel_closed_form, Point};

/// The finite-size regime and centre `u√N` that `limit` is the scaling limit of.
fn finite_counterpart(limit: KernelRegime, u: Complex64, m: usize) -> Result<(KernelRegime, Complex64)> {
    let n = 2 * m;
    let sqrt_n = (n as f64).sqrt();
    let real = KernelRegime::FiniteN { m };
    match limit {
        KernelRegime::OriginBulk => {
            if u.im != 0.0 || u.re.abs() >= 1.0 {
                return Err(Error::InvalidRegime(format!("real bulk needs real |u| < 1, got {u}")));
            }
            Ok((real, u * sqrt_n))
        }
        KernelRegime::RealEdge { u: e } => Ok((real, Complex64::new(e * sqrt_n, 0.0))),
        KernelRegime::ComplexBulk => {
            if u.im <= 0.0 || u.norm() >= 1.0 {
                return Err(Error::InvalidRegime(format!("complex bulk needs Im u > 0 and |u| < 1, got {u}")));
            }
            Ok((real, u * sqrt_n))
        }
        KernelRegime::ComplexEdge { u: e } => Ok((real, e * sqrt_n)),
        KernelRegime::ComplexGinibreBulk => {
            if u.norm() >= 1.0 {
                return Err(Error::InvalidRegime(format!("bulk needs |u| < 1, got {u}")));
            }
            Ok((KernelRegime::ComplexGinibreFinite { n }, u * sqrt_n))
        }
        KernelRegime::ComplexGinibreEdge { u: e } => Ok((KernelRegime::ComplexGinibreFinite { n }, e * sqrt_n)),
        KernelRegime::FiniteN { .. } | KernelRegime::ComplexGinibreFinite { .. } => Err(Error::InvalidRegime(
            format!("{} is not a scaling limit", limit.name()),
        )),
    }
}

/// Largest deviation between the `2M × 2M` ensemble recentred at `u√(2M)` and the limit.
///
/// Each grid entry `(a, b)` is a pair of local coordinates. Real pairs are compared entrywise on
/// the kernel blocks, where the gauge is trivial; all other pairs are compared through the
/// gauge-invariant one- and two-point correlation functions. For the edge regimes the centre is
/// the `u` carried by `limit` and the `u` argument is ignored.
///
/// ```
/// use ginibre::limits::{finite_to_limit_distance, KernelRegime};
/// use ginibre::Complex64;
/// let grid = [(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))];
/// let d25 = finite_to_limit_distance(KernelRegime::OriginBulk, Complex64::new(0.0, 0.0), 25, &grid).unwrap();
/// assert!(d25 < 0.05);
/// ```
pub fn finite_to_limit_distance(
    limit: KernelRegime,
    u: Complex64,
    m: usize,
    grid: &[(Complex64, Complex64)],
) -> Result<f64> {
    limit.validate()?;
    let (finite, centre) = finite_counterpart(limit, u, m)?;
    finite.validate()?;
    let mut worst = 0.0_f64;
    for &(a, b) in grid {
        let d = if limit.is_determinantal() {
            determinantal_distance(limit, finite, centre, a, b)?
        } else {
            pfaffian_distance(limit, m, centre, a, b)?
        };
        worst = worst.max(d);
    }
    Ok(worst)
}

fn pfaffian_distance(limit: KernelRegime, m: usize, centre: Complex64, a: Complex64, b: Complex64) -> Result<f64> {
    let (pa, pb) = (Point::classify(a)?, Point::classify(b)?);
    if let (Point::Real(x), Point::Real(y)) = (pa, pb) {
        let finite = kernel_closed_form(m, Point::Real(x + centre.re), Point::Real(y + centre.re))?;
        let lim = match limit {
            KernelRegime::OriginBulk => super::limit_kernel_origin(pa, pb),
            KernelRegime::RealEdge { u } => super::limit_kernel_real_edge(u, pa, pb)?,
            _ => unreachable!("only real-line limits have matrix kernels"),
        };
        return Ok(finite.distance(&lim));
    }
    let split = |pts: &[Point]| {
        let mut cfg = SpectralConfiguration::default();
        for p in pts {
            match *p {
                Point::Real(x) => cfg.reals.push(x),
                Point::Complex(z) => cfg.uppers.push(z),
            }
        }
        cfg
    };
    let configs = [split(&[pa]), split(&[pb]), split(&[pa, pb])];
    let finite = KernelRegime::FiniteN { m };
    let mut worst = 0.0_f64;
    for cfg in &configs {
        let f = correlation(finite, &cfg.shifted(centre)?)?;
        let l = correlation(limit, cfg)?;
        worst = worst.max((f - l).abs());
    }
    Ok(worst)
}

fn determinantal_distance(
    limit: KernelRegime,
    finite: KernelRegime,
    centre: Complex64,
    a: Complex64,
    b: Complex64,
) -> Result<f64> {
    let configs = [
        SpectralConfiguration::uppers(&[a]),
        SpectralConfiguration::uppers(&[b]),
        SpectralConfiguration::uppers(&[a, b]),
    ];
    let mut worst = 0.0_f64;
    for cfg in &configs {
        let f = correlation(finite, &cfg.shifted(centre)?)?;
        let l = correlation(limit, cfg)?;
        worst = worst.max((f - l).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cplx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real_grid() -> Vec<(Complex64, Complex64)> {
        (0..9)
            .map(|k| {
                let a = -2.0 + 0.5 * k as f64;
                (cplx(a, 0.0), cplx(-a * 0.5, 0.0))
            })
            .collect()
    }

    #[test]
    fn bulk_distance_shrinks() {
        let grid = real_grid();
        let d25 = finite_to_limit_distance(KernelRegime::OriginBulk, cplx(0.5, 0.0), 25, &grid).unwrap();
        let d100 = finite_to_limit_distance(KernelRegime::OriginBulk, cplx(0.5, 0.0), 100, &grid).unwrap();
        assert!(d100 < d25, "{d100} !< {d25}");
    }

    #[test]
    fn mixed_pairs_in_the_real_bulk_converge() {
        let grid = [(cplx(0.2, 0.0), cplx(-0.3, 0.8)), (cplx(0.1, 1.2), cplx(0.5, 0.4))];
        let d = finite_to_limit_distance(KernelRegime::OriginBulk, cplx(0.0, 0.0), 200, &grid).unwrap();
        assert!(d < 1e-3, "{d}");
    }

    #[test]
    fn mixed_pairs_at_the_real_edge_converge() {
        let grid = [(cplx(0.3, 0.0), cplx(0.0, 0.5)), (cplx(-0.4, 0.0), cplx(-1.0, 1.0))];
        let d50 = finite_to_limit_distance(KernelRegime::RealEdge { u: 1.0 }, cplx(0.0, 0.0), 50, &grid).unwrap();
        let d400 = finite_to_limit_distance(KernelRegime::RealEdge { u: 1.0 }, cplx(0.0, 0.0), 400, &grid).unwrap();
        assert!(d400 < d50 && d400 < 0.01, "{d50} -> {d400}");
    }

    #[test]
    fn complex_edge_density_matches_finite_size() {
        // Inside the edge the density approaches the bulk value 1/π; this pins the
        // normalization of the edge kernel.
        let u = cplx(0.0, 1.0);
        let m = 400;
        let centre = u * (2.0 * m as f64).sqrt();
        for t in [-3.0, -1.0, 0.0, 1.0] {
            let s = u * t;
            let finite = crate::correlation::complex_density(KernelRegime::FiniteN { m }, centre + s).unwrap();
            let limit = limit_density(u, s);
            assert!((finite - limit).abs() < 0.01, "t={t}: {finite} vs {limit}");
        }
        assert!((limit_density(u, u * -6.0) - 1.0 / PI).abs() < 1e-12);
    }

    fn limit_density(u: Complex64, s: Complex64) -> f64 {
        super::super::limit_density_complex_edge(u, &[s]).unwrap()
    }

    #[test]
    fn rejects_finite_regimes() {
        assert!(finite_to_limit_distance(KernelRegime::FiniteN { m: 3 }, cplx(0.0, 0.0), 3, &[]).is_err());
    }
}
