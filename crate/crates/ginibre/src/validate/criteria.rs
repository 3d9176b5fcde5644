use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Check;
use crate::correlation::{
    complex_density, correlation, correlation_with_kernel, integrated_counts, real_density, truncation_radius,
    SpectralConfiguration,
};
use crate::error::Result;
use crate::figures::presets;
use crate::grid::evaluate_grid;
use crate::kernel::{kernel_skew_sum, partition_function, r_correction};
use crate::limits::{complex_ginibre_kernel, finite_to_limit_distance, ginue_edge_kernel, KernelRegime};
use crate::montecarlo::{real_count_statistics, sample_ginoe, sample_ginue, sample_rng, DensityHistogram, Window};
use crate::oracle::{correlation_oracle, partition_oracle};
use crate::pfaffian::{
    cauchy_binet_residual, fredholm_expansion_residual, pfaffian, pfaffian_scaling_check, AntisymmetricMatrix,
};
use crate::quadrature::{gauss_legendre, integrate, Tolerance};
use crate::special::{erfc_real, scaled_partial_exp, PartialExpKind};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn random_antisymmetric(rng: &mut ChaCha8Rng, dim: usize, complex: bool) -> AntisymmetricMatrix {
    AntisymmetricMatrix::from_upper(dim, |_, _| {
        let re = normal(rng);
        let im = if complex { normal(rng) } else { 0.0 };
        c(re, im)
    })
    .expect("upper-triangle construction is antisymmetric")
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// The Pfaffian as a signed sum over perfect matchings, by expansion along the first row.
pub fn pfaffian_by_expansion(a: &DMatrix<Complex64>) -> Complex64 {
    fn expand(a: &DMatrix<Complex64>, idx: &[usize]) -> Complex64 {
        if idx.is_empty() {
            return c(1.0, 0.0);
        }
        let first = idx[0];
        let mut total = c(0.0, 0.0);
        for k in 1..idx.len() {
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * a[(first, idx[k])] * expand(a, &rest);
        }
        total
    }
    if a.nrows() % 2 == 1 {
        return c(0.0, 0.0);
    }
    let idx: Vec<usize> = (0..a.nrows()).collect();
    expand(a, &idx)
}

pub(super) fn pfaffian_engine(seed: u64) -> Result<Vec<Check>> {
    let mut rng = sample_rng(seed, 1);
    let (mut worst_det, mut worst_sign) = (0.0_f64, 0.0_f64);
    for k in 0..100 {
        let dim = 2 * (1 + k % 10);
        let a = random_antisymmetric(&mut rng, dim, k % 2 == 1);
        let pf = pfaffian(&a);
        let det = a.as_matrix().clone().determinant();
        worst_det = worst_det.max(relative(pf * pf, det));
        if dim <= 8 {
            worst_sign = worst_sign.max(relative(pf, pfaffian_by_expansion(a.as_matrix())));
        }
    }
    Ok(vec![
        Check::at_most(1, "max |Pf^2 - det| / |det| over 100 matrices, dims 2-20", worst_det, 1e-9),
        Check::at_most(1, "max |Pf - matching expansion| / |Pf|, dims <= 8", worst_sign, 1e-9),
    ])
}

pub(super) fn identities(seed: u64) -> Result<Vec<Check>> {
    let mut rng = sample_rng(seed, 2);
    let mut cb = 0.0_f64;
    for k in 0..50 {
        let j = 1 + k % 3;
        let kk = 1 + (k / 3) % 3;
        let complex = k % 2 == 0;
        let a = DMatrix::from_fn(2 * j, 2 * kk, |_, _| {
            c(0.5 * normal(&mut rng), if complex { 0.5 * normal(&mut rng) } else { 0.0 })
        });
        let b = random_antisymmetric(&mut rng, 2 * j, complex);
        let cm = random_antisymmetric(&mut rng, 2 * kk, complex);
        cb = cb.max(cauchy_binet_residual(&a, &b, &cm)?);
    }
    let mut fredholm = 0.0_f64;
    for t in 1..=3 {
        for complex in [false, true] {
            let k = random_antisymmetric(&mut rng, 2 * t, complex);
            fredholm = fredholm.max(fredholm_expansion_residual(&k)?);
        }
    }
    let mut scaling = 0.0_f64;
    for dim in [2, 4, 6, 8, 10] {
        let a = random_antisymmetric(&mut rng, dim, true);
        let d: Vec<Complex64> = (0..dim).map(|_| c(normal(&mut rng), normal(&mut rng))).collect();
        let (lhs, rhs) = pfaffian_scaling_check(&a, &d)?;
        scaling = scaling.max(relative(lhs, rhs));
    }
    Ok(vec![
        Check::at_most(2, "Cauchy-Binet residual, 50 instances with J, K <= 3", cb, 1e-9),
        Check::at_most(2, "Fredholm expansion residual, T <= 3", fredholm, 1e-10),
        Check::at_most(2, "Pf(D K D^T) against Pf(K) det D, relative", scaling, 1e-10),
    ])
}

fn random_configuration(rng: &mut ChaCha8Rng, m: usize, l: usize, k: usize) -> SpectralConfiguration {
    let r = 0.9 * (2.0 * m as f64).sqrt();
    let reals = (0..l).map(|_| rng.random_range(-r..r)).collect();
    let uppers = (0..k).map(|_| c(rng.random_range(-r..r), rng.random_range(0.1..1.5))).collect();
    SpectralConfiguration { reals, uppers }
}

pub(super) fn two_paths(seed: u64) -> Result<Vec<Check>> {
    let mut rng = sample_rng(seed, 3);
    let shapes = [(2, 0), (0, 2), (1, 1), (1, 0), (0, 1), (2, 1), (1, 2), (3, 0), (0, 3), (2, 2)];
    let mut worst = 0.0_f64;
    let mut count = 0;
    for m in [1, 2, 5, 10, 20] {
        for &(l0, k0) in &shapes {
            let (mut l, mut k) = (l0, k0);
            while l + 2 * k > 2 * m {
                if k > 0 {
                    k -= 1;
                } else {
                    l -= 1;
                }
            }
            if l + k == 0 {
                l = 1;
            }
            let cfg = random_configuration(&mut rng, m, l, k);
            let closed = correlation(KernelRegime::FiniteN { m }, &cfg)?;
            let summed = correlation_with_kernel(&cfg, |a, b| kernel_skew_sum(m, a, b))?.value;
            worst = worst.max(relative(c(closed, 0.0), c(summed, 0.0)));
            count += 1;
        }
    }
    Ok(vec![Check::at_most(
        3,
        format!("max relative gap between the two kernels, {count} configurations, M in {{1,2,5,10,20}}"),
        worst,
        1e-8,
    )])
}

pub(super) fn small_n_exactness(seed: u64) -> Result<Vec<Check>> {
    let mut rng = sample_rng(seed, 4);
    let regime = KernelRegime::FiniteN { m: 1 };
    let (mut r20, mut r01, mut r10) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..20 {
        let cfg = SpectralConfiguration::reals(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
        r20 = r20.max(relative(c(correlation(regime, &cfg)?, 0.0), c(correlation_oracle(2, &cfg)?, 0.0)));
        let cfg = SpectralConfiguration::uppers(&[c(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0))]);
        r01 = r01.max(relative(c(correlation(regime, &cfg)?, 0.0), c(correlation_oracle(2, &cfg)?, 0.0)));
        let cfg = SpectralConfiguration::reals(&[rng.random_range(-2.5..2.5)]);
        r10 = r10.max(relative(c(correlation(regime, &cfg)?, 0.0), c(correlation_oracle(2, &cfg)?, 0.0)));
    }
    let z2 = partition_oracle(2)?;
    let z4 = partition_oracle(4)?;
    let exact2 = 2.0 * (2.0 * PI).sqrt();
    let exact4 = partition_function(2).exp();
    Ok(vec![
        Check::at_most(4, "R_20 against quadrature, 20 sets, relative", r20, 1e-6),
        Check::at_most(4, "R_01 against quadrature, 20 sets, relative", r01, 1e-6),
        Check::at_most(4, "R_10 against quadrature, 20 sets, relative", r10, 1e-6),
        Check::near(4, "N = 2 partition function by quadrature / 2 sqrt(2 pi)", z2 / exact2, 1.0, 1e-6),
        Check::near(4, "N = 4 partition function by quadrature / closed form", z4 / exact4, 1.0, 1e-3),
    ])
}

pub(super) fn sum_rule() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in [1, 2, 4] {
        let (reals, planar) = integrated_counts(m, Tolerance::new(1e-9, 1e-8))?;
        let n = 2.0 * m as f64;
        checks.push(Check::near(
            5,
            format!("M = {m}: (integral of R_10 + 2 x integral of R_01) / 2M"),
            (reals + planar) / n,
            1.0,
            1e-4,
        ));
    }
    Ok(checks)
}

/// Mean of `f` over `[a, b]` by Gauss-Legendre.
fn line_average(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, nodes: &(Vec<f64>, Vec<f64>)) -> Result<f64> {
    let (x, w) = nodes;
    let mut total = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        total += wi * f(0.5 * (a + b) + 0.5 * (b - a) * xi)?;
    }
    Ok(0.5 * total)
}

/// Fraction of occupied bins within `k` standard errors of the expected bin densities, and the
/// number of occupied bins.
fn bins_within(h: &DensityHistogram, expected: &[f64], k: f64) -> (f64, usize) {
    let occupied: Vec<usize> = (0..h.counts.len()).filter(|&b| h.counts[b] > 0).collect();
    let good = occupied
        .iter()
        .filter(|&&b| (h.density(b) - expected[b]).abs() <= k * h.standard_error(b))
        .count();
    (good as f64 / occupied.len().max(1) as f64, occupied.len())
}

pub(super) fn ginoe_concordance(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let m = 4;
    let regime = KernelRegime::FiniteN { m };
    let batch = sample_ginoe(2 * m, samples, seed)?;
    let (mean, se) = real_count_statistics(&batch.samples);
    let l = truncation_radius(m);
    let expected = integrate(|x| real_density(regime, x).unwrap_or(f64::NAN), -l, l, Tolerance::new(1e-10, 1e-10))?.value;

    let gl = gauss_legendre(12);
    let line = Window::Line { lo: -4.5, hi: 4.5, bins: 18 };
    let mut hr = DensityHistogram::new(line)?;
    for s in &batch.samples {
        hr.add_sample(s.reals.iter().map(|&x| c(x, 0.0)));
    }
    let want_r = (0..line.bins())
        .map(|b| {
            let (a, bb) = line.edges(b);
            line_average(&|x| real_density(regime, x), a, bb, &gl)
        })
        .collect::<Result<Vec<_>>>()?;
    let (frac_r, occ_r) = bins_within(&hr, &want_r, 4.0);

    let plane = Window::Plane { x_lo: -4.0, x_hi: 4.0, y_lo: 0.0, y_hi: 4.0, nx: 16, ny: 8 };
    let mut hc = DensityHistogram::new(plane)?;
    for s in &batch.samples {
        hc.add_sample(s.pairs.iter().copied());
    }
    let gl6 = gauss_legendre(6);
    let want_c = (0..plane.bins())
        .map(|b| {
            let ctr = plane.center(b);
            let (hx, hy) = (0.25, 0.25);
            line_average(
                &|y| line_average(&|x| complex_density(regime, c(x, y)), ctr.re - hx, ctr.re + hx, &gl6),
                ctr.im - hy,
                ctr.im + hy,
                &gl6,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let (frac_c, occ_c) = bins_within(&hc, &want_c, 4.0);

    Ok(vec![
        Check::at_most(
            6,
            format!("|mean real count {mean:.5} - integral of R_10 {expected:.5}| in standard errors"),
            (mean - expected).abs() / se,
            3.0,
        ),
        Check::at_least(6, format!("fraction of {occ_r} occupied real-axis bins within 4 standard errors"), frac_r, 0.9),
        Check::at_least(6, format!("fraction of {occ_c} occupied upper-half bins within 4 standard errors"), frac_c, 0.9),
        Check::at_most(6, "eigensolver failures / samples", batch.failures as f64 / samples.max(1) as f64, 1e-4),
    ])
}

/// Distances below this are rounding noise.
const ROUNDING_FLOOR: f64 = 1e-12;

fn bulk_grid() -> Vec<(Complex64, Complex64)> {
    let mut grid = Vec::new();
    for a in [-2.0, 0.0, 2.0] {
        for b in [-1.0, 0.5, 1.5] {
            grid.push((c(a, 0.0), c(b, 0.0)));
        }
    }
    grid
}

pub(super) fn bulk_limit() -> Result<Vec<Check>> {
    let grid = bulk_grid();
    let mut checks = Vec::new();
    for u in [0.0, 0.5] {
        let d = [25, 100, 400]
            .iter()
            .map(|&m| finite_to_limit_distance(KernelRegime::OriginBulk, c(u, 0.0), m, &grid))
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::holds(
            7,
            format!("u = {u}: distance decreases over M = 25, 100, 400 ({:.3e}, {:.3e}, {:.3e})", d[0], d[1], d[2]),
            d[0] > d[1] && d[1] > d[2],
        ));
        let settled = |a: f64, b: f64| b < a || a.max(b) <= ROUNDING_FLOOR;
        checks.push(Check::holds(
            7,
            format!("u = {u}: each distance is below the previous one or both are under {ROUNDING_FLOOR:e}"),
            settled(d[0], d[1]) && settled(d[1], d[2]),
        ));
        checks.push(Check::at_most(7, format!("u = {u}: distance at M = 400"), d[2], 0.02));
    }
    Ok(checks)
}

pub(super) fn complex_bulk() -> Result<Vec<Check>> {
    let m = 400;
    let u = c(0.3, 0.4);
    let z = u * (2.0 * m as f64).sqrt();
    let density = complex_density(KernelRegime::FiniteN { m }, z)?;
    let pair = correlation(KernelRegime::ComplexBulk, &SpectralConfiguration::uppers(&[c(0.0, 0.0), c(1.0, 0.0)]))?;
    Ok(vec![
        Check::near(8, "R_01(u sqrt(2M)) at M = 400, u = 0.3+0.4i, against 1/pi", density, 1.0 / PI, 1e-3),
        Check::near(8, "limiting R_02 at separation 1 against (1 - 1/e)/pi^2", pair, (1.0 - (-1.0f64).exp()) / (PI * PI), 1e-10),
    ])
}

pub(super) fn real_edge() -> Result<Vec<Check>> {
    let edge = KernelRegime::RealEdge { u: 1.0 };
    let left = real_density(edge, -4.0)?;
    let right = real_density(edge, 4.0)?;
    let mut grid = Vec::new();
    for a in [-2.0, 0.0, 1.0] {
        for b in [-1.0, 0.5, 2.0] {
            grid.push((c(a, 0.0), c(b, 0.0)));
        }
    }
    let d50 = finite_to_limit_distance(edge, c(1.0, 0.0), 50, &grid)?;
    let d200 = finite_to_limit_distance(edge, c(1.0, 0.0), 200, &grid)?;
    Ok(vec![
        Check::near(9, "edge R_10(-4) against 1/sqrt(2 pi)", left, 1.0 / (2.0 * PI).sqrt(), 1e-3),
        Check::at_most(9, "edge R_10(+4)", right, 1e-3),
        Check::holds(9, format!("edge distance decreases from M = 50 ({d50:.3e}) to M = 200 ({d200:.3e})"), d200 < d50),
    ])
}

pub(super) fn asymptotics() -> Result<Vec<Check>> {
    let t = c(100.0, 0.0);
    let bulk = scaled_partial_exp(PartialExpKind::Exp, 200, t, t)?.value.re;
    let t = c(800.0, 0.0);
    let edge = scaled_partial_exp(PartialExpKind::Exp, 400, t, t)?.value.re;
    let m = 200;
    let root = (2.0 * m as f64).sqrt();
    let (s, r) = (c(0.0, 0.5), 0.3);
    let finite = r_correction(m, root + s, root + r)?;
    let printed = (-s * s).exp() * erfc_real(-r) / (4.0 * PI.sqrt());
    let weighted = printed * erfc_real(SQRT_2 * s.im).sqrt();
    Ok(vec![
        Check::at_most(10, "|e^{-2Mu^2} e_M(2Mu^2) - 1| at u = 0.5, M = 200", (bulk - 1.0).abs(), 1e-6),
        Check::near(10, "e^{-2M} e_M(2M) at M = 400 against 1/2", edge, 0.5, 0.01),
        Check::at_most(
            10,
            "|r_M - e^{-s^2} erfc(-r) sqrt(erfc(sqrt2 Im s))/(4 sqrt(pi))| at M = 200, s = 0.5i, r = 0.3",
            (finite - weighted).norm(),
            0.02,
        ),
        Check::at_most(
            10,
            "|r_M - e^{-s^2} erfc(-r)/(4 sqrt(pi))| at M = 200, s = 0.5i, r = 0.3",
            (finite - printed).norm(),
            0.02,
        ),
    ])
}

/// Mean of a radial density over the annulus `a ≤ |z| < b`.
fn annulus_average(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    let gl = gauss_legendre(16);
    let mean_rf = line_average(&|r| Ok(r * f(r)?), a, b, &gl)?;
    Ok(mean_rf * 2.0 * (b - a) / (b * b - a * a))
}

pub(super) fn complex_ginibre(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let n = 16;
    let batch = sample_ginue(n, samples, seed)?;
    let pts: Vec<&[Complex64]> = batch.samples.iter().map(|s| s.eigenvalues.as_slice()).collect();

    let disk = Window::Radial { lo: 0.0, hi: 1.0, bins: 1 };
    let mut hd = DensityHistogram::new(disk)?;
    for p in &pts {
        hd.add_sample(p.iter().copied());
    }
    let (rho, se) = (hd.density(0), hd.standard_error(0));

    let root = (n as f64).sqrt();
    let ring = Window::Radial { lo: root - 2.0, hi: root + 2.0, bins: 16 };
    let mut he = DensityHistogram::new(ring)?;
    for p in &pts {
        he.add_sample(p.iter().copied());
    }
    let one = c(1.0, 0.0);
    let mut law_z = 0.0_f64;
    let mut finite_z = 0.0_f64;
    for b in 0..ring.bins() {
        let (a, bb) = ring.edges(b);
        let law = annulus_average(&|r| Ok(ginue_edge_kernel(one, c(r - root, 0.0), c(r - root, 0.0))?.re), a, bb)?;
        let exact = annulus_average(&|r| Ok(complex_ginibre_kernel(n, c(r, 0.0), c(r, 0.0))?.re), a, bb)?;
        let sigma = he.standard_error(b);
        law_z = law_z.max((he.density(b) - law).abs() / sigma);
        finite_z = finite_z.max((he.density(b) - exact).abs() / sigma);
    }
    Ok(vec![
        Check::at_most(
            11,
            format!("n = 16 density on |z| < 1 ({rho:.5} +- {se:.5}) minus 1/pi, in standard errors"),
            (rho - 1.0 / PI).abs() / se,
            3.0,
        ),
        Check::at_least(11, "distance of the same density from 1/(2 pi), in standard errors", (rho - 0.5 / PI).abs() / se, 3.0),
        Check::at_most(
            11,
            "edge profile: max over 16 radial bins of |histogram - erfc law| in standard errors",
            law_z,
            3.0,
        ),
        Check::at_most(
            11,
            "edge profile: max over 16 radial bins of |histogram - exact n = 16 kernel| in standard errors",
            finite_z,
            3.0,
        ),
        Check::at_most(11, "eigensolver failures / samples", batch.failures as f64 / samples.max(1) as f64, 1e-4),
    ])
}

fn value_at(data: &crate::grid::GridData, x: f64, y: Option<f64>) -> f64 {
    data.rows
        .iter()
        .find(|r| r.x == x && r.y == y)
        .map_or(f64::NAN, |r| r.value)
}

pub(super) fn figures() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for p in presets() {
        let data = evaluate_grid(&p.spec)?;
        let ok = data.rows.len() == p.spec.len() && data.rows.iter().all(|r| r.value.is_finite());
        checks.push(Check::holds(12, format!("{} emits {} finite grid values", p.id, p.spec.len()), ok));
        match p.id {
            "fig:1" => checks.push(Check::near(
                12,
                "fig:1 value at separation 6 against 1/(2 pi)",
                value_at(&data, 6.0, None),
                0.5 / PI,
                1e-3,
            )),
            "fig:4" => checks.push(Check::near(
                12,
                "fig:4 value at separation 3+3i against 1/pi^2",
                value_at(&data, 3.0, Some(3.0)),
                1.0 / (PI * PI),
                1e-3,
            )),
            "fig:8" => {
                let left = value_at(&data, -4.0, None);
                checks.push(Check::near(12, "fig:8 value at Im s = -4 against 2/pi", left, 2.0 / PI, 5e-3));
                checks.push(Check::near(12, "fig:8 value at Im s = -4 against 1/pi", left, 1.0 / PI, 5e-3));
            }
            _ => {}
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_of_small_pfaffians() {
        let a = DMatrix::from_row_slice(
            4,
            4,
            &[0.0, 1.0, 2.0, 3.0, -1.0, 0.0, 4.0, 5.0, -2.0, -4.0, 0.0, 6.0, -3.0, -5.0, -6.0, 0.0],
        )
        .map(|x| c(x, 0.0));
        // a01 a23 − a02 a13 + a03 a12
        assert_eq!(pfaffian_by_expansion(&a), c(1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0, 0.0));
    }

    #[test]
    fn annulus_average_of_a_constant() {
        let v = annulus_average(&|_| Ok(2.5), 1.0, 3.0).unwrap();
        assert!((v - 2.5).abs() < 1e-14);
    }
}
