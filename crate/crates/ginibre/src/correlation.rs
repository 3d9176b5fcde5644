//! Correlation functions `R_{ℓ,m}` as Pfaffians of assembled kernel blocks, or as
//! determinants in the determinantal regimes.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{kernel_closed_form, KernelBlock, Point};
use crate::limits::{
    complex_bulk_kernel, complex_edge_kernel, complex_ginibre_kernel, ginue_bulk_kernel, ginue_edge_kernel, limit_density_complex_bulk,
    limit_density_complex_edge, limit_kernel_origin, limit_kernel_real_edge, KernelRegime,
};
use crate::pfaffian::{pfaffian, AntisymmetricMatrix};
use crate::quadrature::{integrate, Tolerance};

/// Relative size of the imaginary part above which an assembled Pfaffian is rejected.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-6;

/// The arguments `(x, z)` of `R_{ℓ,m}`: `ℓ` real points and `m` points off the real axis.
///
/// For Pfaffian regimes the `uppers` must lie strictly above the real axis. The determinantal
/// regimes take local coordinates anywhere in the plane.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfiguration {
    pub reals: Vec<f64>,
    pub uppers: Vec<Complex64>,
}

impl SpectralConfiguration {
    pub fn new(reals: Vec<f64>, uppers: Vec<Complex64>) -> Result<Self> {
        let finite = reals.iter().all(|x| x.is_finite()) && uppers.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::Domain("configuration contains a non-finite point".into()));
        }
        Ok(Self { reals, uppers })
    }

    pub fn reals(reals: &[f64]) -> Self {
        Self {
            reals: reals.to_vec(),
            uppers: Vec::new(),
        }
    }

    pub fn uppers(uppers: &[Complex64]) -> Self {
        Self {
            reals: Vec::new(),
            uppers: uppers.to_vec(),
        }
    }

    /// `(ℓ, m)`.
    pub fn order(&self) -> (usize, usize) {
        (self.reals.len(), self.uppers.len())
    }

    /// Translates every point by `shift`, which must be real when real points are present.
    pub fn shifted(&self, shift: Complex64) -> Result<Self> {
        if !self.reals.is_empty() && shift.im != 0.0 {
            return Err(Error::Domain("real points can only be shifted along the real axis".into()));
        }
        Ok(Self {
            reals: self.reals.iter().map(|x| x + shift.re).collect(),
            uppers: self.uppers.iter().map(|z| z + shift).collect(),
        })
    }

    /// Reals first, then the complex points, each classified.
    fn points(&self) -> Result<Vec<Point>> {
        let mut pts: Vec<Point> = self.reals.iter().map(|&x| Point::Real(x)).collect();
        for &z in &self.uppers {
            match Point::classify(z)? {
                Point::Complex(z) => pts.push(Point::Complex(z)),
                Point::Real(_) => {
                    return Err(Error::Domain(format!(
                        "upper point {z} is on the real axis; list it among the reals"
                    )))
                }
            }
        }
        Ok(pts)
    }
}

/// The `(ℓ + m) × (ℓ + m)` array of kernel blocks whose flattening is antisymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockKernelMatrix {
    points: Vec<Point>,
    blocks: Vec<KernelBlock>,
}

impl BlockKernelMatrix {
    /// Evaluates `kernel` on pairs `t ≤ t'` and fills the rest by `K(γ', γ) = −K(γ, γ')ᵀ`.
    pub fn assemble<F>(points: Vec<Point>, mut kernel: F) -> Result<Self>
    where
        F: FnMut(Point, Point) -> Result<KernelBlock>,
    {
        let n = points.len();
        let mut blocks = vec![KernelBlock::new(0.0.into(), 0.0.into(), 0.0.into(), 0.0.into()); n * n];
        for i in 0..n {
            for j in i..n {
                let b = kernel(points[i], points[j])?;
                blocks[j * n + i] = b.swapped();
                blocks[i * n + j] = b;
            }
        }
        Ok(Self { points, blocks })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn block(&self, i: usize, j: usize) -> &KernelBlock {
        &self.blocks[i * self.points.len() + j]
    }

    /// `true` when any block was evaluated with a cancellation warning.
    pub fn precision_loss(&self) -> bool {
        self.blocks.iter().any(|b| b.precision_loss)
    }

    /// The `2(ℓ + m)`-dimensional antisymmetric matrix.
    pub fn flatten(&self) -> Result<AntisymmetricMatrix> {
        let n = self.points.len();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let b = self.block(i, j).matrix();
                for r in 0..2 {
                    for c in 0..2 {
                        m[(2 * i + r, 2 * j + c)] = b[(r, c)];
                    }
                }
            }
        }
        AntisymmetricMatrix::new(m)
    }
}

/// A correlation value together with the cancellation warning of its kernel evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationValue {
    pub value: f64,
    pub precision_loss: bool,
}

/// The `2 × 2` kernel block of a Pfaffian regime.
pub fn kernel_block(regime: KernelRegime, a: Point, b: Point) -> Result<KernelBlock> {
    match regime {
        KernelRegime::FiniteN { m } => kernel_closed_form(m, a, b),
        KernelRegime::OriginBulk => Ok(limit_kernel_origin(a, b)),
        KernelRegime::RealEdge { u } => limit_kernel_real_edge(u, a, b),
        _ => Err(Error::InvalidRegime(format!("{} has no matrix kernel", regime.name()))),
    }
}

/// The scalar kernel `K(z, z')` of a determinantal regime.
pub fn scalar_kernel(regime: KernelRegime, z: Complex64, zp: Complex64) -> Result<Complex64> {
    match regime {
        KernelRegime::ComplexBulk => Ok(complex_bulk_kernel(z, zp)),
        KernelRegime::ComplexEdge { u } => complex_edge_kernel(u, z, zp),
        KernelRegime::ComplexGinibreFinite { n } => complex_ginibre_kernel(n, z, zp),
        KernelRegime::ComplexGinibreBulk => Ok(ginue_bulk_kernel(z, zp)),
        KernelRegime::ComplexGinibreEdge { u } => ginue_edge_kernel(u, z, zp),
        _ => Err(Error::InvalidRegime(format!("{} has no scalar kernel", regime.name()))),
    }
}

fn block_kernel(regime: KernelRegime) -> impl FnMut(Point, Point) -> Result<KernelBlock> {
    move |a, b| kernel_block(regime, a, b)
}

/// Returns the real part of `v`, rejecting a non-negligible imaginary part.
fn real_part(v: Complex64, floor: f64) -> Result<f64> {
    if v.im.abs() > IMAGINARY_RESIDUE_TOLERANCE * v.re.abs() + floor {
        return Err(Error::ImaginaryResidue { real: v.re, imag: v.im });
    }
    Ok(v.re)
}

fn pfaffian_correlation(regime: KernelRegime, cfg: &SpectralConfiguration) -> Result<CorrelationValue> {
    let (l, m) = cfg.order();
    if let KernelRegime::FiniteN { m: big_m } = regime {
        if l + 2 * m > 2 * big_m {
            return Err(Error::Dimension(format!(
                "R_{{{l},{m}}} needs l + 2m <= 2M = {}",
                2 * big_m
            )));
        }
    }
    correlation_with_kernel(cfg, block_kernel(regime))
}

/// `R_{ℓ,m}` as the Pfaffian of blocks produced by an arbitrary matrix kernel.
///
/// ```
/// use ginibre::correlation::{correlation_with_kernel, SpectralConfiguration};
/// use ginibre::kernel::kernel_skew_sum;
/// let cfg = SpectralConfiguration::reals(&[0.0]);
/// let r = correlation_with_kernel(&cfg, |a, b| kernel_skew_sum(1, a, b)).unwrap();
/// assert!((r.value - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
/// ```
pub fn correlation_with_kernel<F>(cfg: &SpectralConfiguration, kernel: F) -> Result<CorrelationValue>
where
    F: FnMut(Point, Point) -> Result<KernelBlock>,
{
    let (l, m) = cfg.order();
    let bm = BlockKernelMatrix::assemble(cfg.points()?, kernel)?;
    let a = bm.flatten()?;
    let scale = a.as_matrix().iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    let floor = 1e-12 * scale.powi((l + m) as i32);
    Ok(CorrelationValue {
        value: real_part(pfaffian(&a), floor)?,
        precision_loss: bm.precision_loss(),
    })
}

fn determinant_correlation(regime: KernelRegime, cfg: &SpectralConfiguration) -> Result<f64> {
    let (l, _) = cfg.order();
    if l != 0 {
        return Err(Error::InvalidRegime(format!(
            "{} describes points off the real axis only; got {l} real points",
            regime.name()
        )));
    }
    let pts = &cfg.uppers;
    let n = pts.len();
    let det = |f: &dyn Fn(Complex64, Complex64) -> Result<Complex64>| -> Result<f64> {
        let mut k = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                k[(i, j)] = f(pts[i], pts[j])?;
            }
        }
        let scale = k.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        real_part(k.determinant(), 1e-12 * scale.powi(n as i32))
    };
    match regime {
        KernelRegime::ComplexBulk => Ok(limit_density_complex_bulk(pts)),
        KernelRegime::ComplexEdge { u } => limit_density_complex_edge(u, pts),
        KernelRegime::ComplexGinibreFinite { n: size } => det(&|a, b| complex_ginibre_kernel(size, a, b)),
        KernelRegime::ComplexGinibreBulk => det(&|a, b| Ok(ginue_bulk_kernel(a, b))),
        KernelRegime::ComplexGinibreEdge { u } => det(&|a, b| ginue_edge_kernel(u, a, b)),
        _ => unreachable!("pfaffian regimes are dispatched elsewhere"),
    }
}

/// `R_{ℓ,m}(x, z)` with its cancellation warning.
pub fn evaluate(regime: KernelRegime, cfg: &SpectralConfiguration) -> Result<CorrelationValue> {
    regime.validate()?;
    if cfg.reals.is_empty() && cfg.uppers.is_empty() {
        return Ok(CorrelationValue {
            value: 1.0,
            precision_loss: false,
        });
    }
    if regime.is_determinantal() {
        Ok(CorrelationValue {
            value: determinant_correlation(regime, cfg)?,
            precision_loss: false,
        })
    } else {
        pfaffian_correlation(regime, cfg)
    }
}

/// The correlation function `R_{ℓ,m}(x, z)` of `regime`.
///
/// Real points come first in the assembled matrix, then complex points. In the determinantal
/// regimes only `ℓ = 0` is meaningful.
///
/// ```
/// use ginibre::correlation::{correlation, SpectralConfiguration};
/// use ginibre::limits::KernelRegime;
/// let cfg = SpectralConfiguration::reals(&[0.0, 6.0]);
/// let r = correlation(KernelRegime::OriginBulk, &cfg).unwrap();
/// assert!((r - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-4);
/// ```
pub fn correlation(regime: KernelRegime, cfg: &SpectralConfiguration) -> Result<f64> {
    Ok(evaluate(regime, cfg)?.value)
}

/// The density of real eigenvalues `R_{1,0}(x)`.
pub fn real_density(regime: KernelRegime, x: f64) -> Result<f64> {
    correlation(regime, &SpectralConfiguration::reals(&[x]))
}

/// The density `R_{0,1}(z)` of complex eigenvalues, counting each conjugate pair once.
pub fn complex_density(regime: KernelRegime, z: Complex64) -> Result<f64> {
    correlation(regime, &SpectralConfiguration::uppers(&[z]))
}

/// Half-width of the box outside which the `2M × 2M` densities are negligible.
pub fn truncation_radius(m: usize) -> f64 {
    (4.0 * m as f64).sqrt() + 8.0
}

/// `(∫_ℝ R_{1,0}, 2∫_H R_{0,1})` for the `2M × 2M` ensemble; the two add up to `2M`.
///
/// The real integral runs over `[−L, L]` and the planar one over `[−L, L] × (0, L]`, with
/// `L = √(4M) + 8`.
pub fn integrated_counts(m: usize, tol: Tolerance) -> Result<(f64, f64)> {
    if m == 0 || m > 8 {
        return Err(Error::Domain(format!("integrated counts support 1 <= M <= 8, got {m}")));
    }
    let regime = KernelRegime::FiniteN { m };
    let l = truncation_radius(m);
    let mut err = None;
    let mut guard = |v: Result<f64>| {
        v.unwrap_or_else(|e| {
            err.get_or_insert(e);
            0.0
        })
    };
    let reals = integrate(|x| guard(real_density(regime, x)), -l, l, tol)?.value;
    let inner_tol = Tolerance::new(tol.abs * 0.1, tol.rel * 0.1);
    let mut inner_err = None;
    let row = |y: f64| -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let q = integrate(
            |x| complex_density(regime, Complex64::new(x, y)).unwrap_or(f64::NAN),
            -l,
            l,
            inner_tol,
        );
        match q {
            Ok(q) if q.value.is_finite() => q.value,
            Ok(q) => {
                inner_err.get_or_insert(Error::Domain(format!("non-finite density integral at y = {y}: {}", q.value)));
                0.0
            }
            Err(e) => {
                inner_err.get_or_insert(e);
                0.0
            }
        }
    };
    let planar = integrate(row, 0.0, l, tol)?.value;
    if let Some(e) = err.or(inner_err) {
        return Err(e);
    }
    Ok((reals, 2.0 * planar))
}
