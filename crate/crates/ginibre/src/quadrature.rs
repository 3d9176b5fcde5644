//! Adaptive Gauss–Kronrod and fixed Gauss–Legendre quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Stopping rule for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Maximum number of subintervals before giving up.
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_intervals: 2000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-10)
    }
}

/// An integral estimate with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Piece {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// Adaptive G7–K15 integration of `f` over `[a, b]`.
///
/// ```
/// use ginibre::quadrature::{integrate, Tolerance};
/// let q = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, Tolerance::default()).unwrap();
/// assert!((q.value - 2.0).abs() < 1e-12);
/// ```
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Quadrature> {
    integrate_with_breakpoints(f, &[a, b], tol)
}

/// Adaptive integration over `[points[0], points[last]]`, starting from the given subdivision.
///
/// Breakpoints should be placed at kinks and discontinuities of the integrand.
pub fn integrate_with_breakpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    tol: Tolerance,
) -> Result<Quadrature> {
    if points.len() < 2 {
        return Err(Error::Domain("need at least two integration endpoints".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let p = gk15(&mut f, w[0], w[1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    loop {
        if !value.is_finite() {
            return Err(Error::QuadratureNonconvergence {
                estimate: value,
                error,
            });
        }
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Quadrature { value, error });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::QuadratureNonconvergence {
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            return Err(Error::QuadratureNonconvergence {
                estimate: value,
                error,
            });
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if error < 0.0 {
            error = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
///
/// ```
/// use ginibre::quadrature::gauss_legendre;
/// let (x, w) = gauss_legendre(5);
/// let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
/// assert!((integral - 2.0 / 9.0).abs() < 1e-15);
/// ```
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// A Gauss–Legendre rule applied piecewise on consecutive breakpoints.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    /// `per_piece` nodes on each interval between consecutive entries of `points`.
    pub fn new(points: &[f64], per_piece: usize) -> Self {
        let (x, w) = gauss_legendre(per_piece);
        let mut nodes = Vec::with_capacity(points.len() * per_piece);
        let mut weights = Vec::with_capacity(points.len() * per_piece);
        for p in points.windows(2) {
            let c = 0.5 * (p[0] + p[1]);
            let h = 0.5 * (p[1] - p[0]);
            if h <= 0.0 {
                continue;
            }
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(c + h * xi);
                weights.push(h * wi);
            }
        }
        Self { nodes, weights }
    }

    pub fn apply<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Splits `[a, b]` into `pieces` equal subintervals, inserting the extra breakpoints in order.
pub fn breakpoints(a: f64, b: f64, pieces: usize, extra: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=pieces)
        .map(|k| a + (b - a) * k as f64 / pieces as f64)
        .collect();
    pts.extend(extra.iter().copied().filter(|&x| x > a && x < b));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let q = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, Tolerance::new(1e-14, 1e-14))
            .unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn kink_with_breakpoint() {
        let q = integrate_with_breakpoints(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], Tolerance::default())
            .unwrap();
        assert!((q.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn legendre_rules_are_exact_for_polynomials() {
        for n in 1..30 {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            let deg = 2 * n - 2;
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((got - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn composite_rule() {
        let rule = CompositeRule::new(&breakpoints(0.0, 3.0, 3, &[1.5]), 12);
        let got = rule.apply(|x| x.exp());
        assert!((got - (3.0_f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn reports_nonconvergence() {
        let tol = Tolerance {
            abs: 1e-15,
            rel: 1e-15,
            max_intervals: 4,
        };
        assert!(matches!(
            integrate(|x: f64| if x < 1.0 / 3.0 { 0.0 } else { 1.0 }, 0.0, 1.0, tol),
            Err(Error::QuadratureNonconvergence { .. })
        ));
    }
}
