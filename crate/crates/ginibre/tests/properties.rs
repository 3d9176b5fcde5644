//! Property tests for the algebraic and probabilistic invariants of the library.

use ginibre::correlation::{correlation, BlockKernelMatrix, SpectralConfiguration};
use ginibre::grid::{evaluate_grid, Axis, GridSpec, Observable};
use ginibre::kernel::{kernel_closed_form, Point};
use ginibre::limits::{limit_kernel_origin, limit_kernel_real_edge, KernelRegime};
use ginibre::montecarlo::{DensityHistogram, Window};
use ginibre::pfaffian::{pfaffian, AntisymmetricMatrix};
use ginibre::special::{erfc_complex, erfc_real, regularized_gamma_q, scaled_partial_exp, PartialExpKind};
use ginibre::Complex64;
use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn antisymmetric(entries: &[(f64, f64)], dim: usize) -> AntisymmetricMatrix {
    let mut it = entries.iter().cycle();
    AntisymmetricMatrix::from_upper(dim, |_, _| {
        let (re, im) = *it.next().unwrap();
        c(re, im)
    })
    .unwrap()
}

fn entries() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..200)
}

fn point() -> impl Strategy<Value = Point> {
    prop_oneof![
        (-3.0..3.0f64).prop_map(Point::Real),
        ((-3.0..3.0f64), (0.05..2.5f64)).prop_map(|(x, y)| Point::Complex(c(x, y))),
    ]
}

fn configuration(max_reals: usize, max_uppers: usize, r: f64) -> impl Strategy<Value = SpectralConfiguration> {
    (
        prop::collection::vec(-r..r, 0..=max_reals),
        prop::collection::vec(((-r..r), (0.05..2.5f64)), 0..=max_uppers),
    )
        .prop_map(|(reals, ups)| SpectralConfiguration {
            reals,
            uppers: ups.into_iter().map(|(x, y)| c(x, y)).collect(),
        })
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        rng_seed: RngSeed::Fixed(20_240_611),
        ..ProptestConfig::default()
    })]

    #[test]
    fn pfaffian_squared_is_determinant(e in entries(), t in 1usize..=10) {
        let a = antisymmetric(&e, 2 * t);
        let pf = pfaffian(&a);
        let det = a.as_matrix().clone().lu().determinant();
        prop_assume!(det.norm() > 1e-8);
        prop_assert!(rel(pf * pf, det) <= 1e-9);
    }

    #[test]
    fn pfaffian_of_negation(e in entries(), t in 1usize..=8) {
        let a = antisymmetric(&e, 2 * t);
        let neg = AntisymmetricMatrix::new(-a.as_matrix().clone()).unwrap();
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((pfaffian(&neg) - sign * pfaffian(&a)).norm() <= 1e-12 * pfaffian(&a).norm().max(1.0));
    }

    #[test]
    fn pfaffian_of_direct_sum(e in entries(), f in entries(), s in 1usize..=4, t in 1usize..=4) {
        let a = antisymmetric(&e, 2 * s);
        let b = antisymmetric(&f, 2 * t);
        let n = 2 * (s + t);
        let mut m = DMatrix::zeros(n, n);
        m.view_mut((0, 0), (2 * s, 2 * s)).copy_from(a.as_matrix());
        m.view_mut((2 * s, 2 * s), (2 * t, 2 * t)).copy_from(b.as_matrix());
        let sum = AntisymmetricMatrix::new(m).unwrap();
        let want = pfaffian(&a) * pfaffian(&b);
        prop_assert!((pfaffian(&sum) - want).norm() <= 1e-11 * want.norm().max(1.0));
    }

    #[test]
    fn block_permutation_leaves_the_pfaffian_unchanged(
        pts in prop::collection::vec(point(), 1..=4),
        m in 2usize..=6,
        seed in any::<u64>(),
    ) {
        let mut perm: Vec<usize> = (0..pts.len()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let shuffled: Vec<Point> = perm.iter().map(|&i| pts[i]).collect();
        let k = |a, b| kernel_closed_form(m, a, b);
        let t = pts.len() as i32;
        let fa = BlockKernelMatrix::assemble(pts, k).unwrap().flatten().unwrap();
        let fb = BlockKernelMatrix::assemble(shuffled, k).unwrap().flatten().unwrap();
        let scale = fa.as_matrix().iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        let (a, b) = (pfaffian(&fa), pfaffian(&fb));
        // Rounding in a Pfaffian is relative to the entries, not to the (possibly cancelled) value.
        prop_assert!((a - b).norm() <= 1e-12 * (a.norm() + scale.powi(t)), "{a} vs {b}");
    }

    #[test]
    fn correlation_is_symmetric_in_its_arguments(cfg in configuration(2, 2, 3.0), m in 3usize..=8) {
        let regime = KernelRegime::FiniteN { m };
        let mut rev = cfg.clone();
        rev.reals.reverse();
        rev.uppers.reverse();
        let a = correlation(regime, &cfg).unwrap();
        let b = correlation(regime, &rev).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-12), "{a} vs {b}");
    }

    #[test]
    fn finite_kernel_is_antisymmetric(a in point(), b in point(), m in 1usize..=40) {
        let ab = kernel_closed_form(m, a, b).unwrap();
        let ba = kernel_closed_form(m, b, a).unwrap();
        let scale = ab.ds.norm().max(ab.is_plus_e.norm()).max(ab.s.norm()).max(1.0);
        prop_assert!((ab.ds + ba.ds).norm() <= 1e-12 * scale);
        prop_assert!((ab.is_plus_e + ba.is_plus_e).norm() <= 1e-12 * scale);
        prop_assert!((ab.s - ba.s_swapped).norm() <= 1e-12 * scale);
    }

    #[test]
    fn limit_kernels_are_antisymmetric(a in point(), b in point(), sign in prop::bool::ANY) {
        let u = if sign { 1.0 } else { -1.0 };
        for (ab, ba) in [
            (limit_kernel_origin(a, b), limit_kernel_origin(b, a)),
            (limit_kernel_real_edge(u, a, b).unwrap(), limit_kernel_real_edge(u, b, a).unwrap()),
        ] {
            prop_assert!((ab.ds + ba.ds).norm() <= 1e-12);
            prop_assert!((ab.is_plus_e + ba.is_plus_e).norm() <= 1e-12);
            prop_assert!((ab.s - ba.s_swapped).norm() <= 1e-12);
        }
    }

    #[test]
    fn origin_kernel_is_invariant_under_real_shifts(a in point(), b in point(), shift in -10.0..10.0f64) {
        let k0 = limit_kernel_origin(a, b);
        let k1 = limit_kernel_origin(a.shifted(c(shift, 0.0)).unwrap(), b.shifted(c(shift, 0.0)).unwrap());
        prop_assert!(k0.distance(&k1) <= 1e-12);
    }

    #[test]
    fn pfaffian_correlations_are_nonnegative(cfg in configuration(2, 2, 3.0), m in 2usize..=6, which in 0usize..4) {
        let (l, k) = cfg.order();
        prop_assume!(l + k > 0 && l + 2 * k <= 2 * m);
        let regime = [
            KernelRegime::FiniteN { m },
            KernelRegime::OriginBulk,
            KernelRegime::RealEdge { u: 1.0 },
            KernelRegime::RealEdge { u: -1.0 },
        ][which];
        let r = correlation(regime, &cfg).unwrap();
        prop_assert!(r >= -1e-8, "{regime:?} {cfg:?}: {r}");
    }

    #[test]
    fn determinantal_correlations_are_nonnegative(
        pts in prop::collection::vec(((-3.0..3.0f64), (-3.0..3.0f64)), 1..=4),
        which in 0usize..5,
    ) {
        let i = c(0.0, 1.0);
        let regime = [
            KernelRegime::ComplexBulk,
            KernelRegime::ComplexEdge { u: i },
            KernelRegime::ComplexGinibreFinite { n: 9 },
            KernelRegime::ComplexGinibreBulk,
            KernelRegime::ComplexGinibreEdge { u: c(1.0, 0.0) },
        ][which];
        let cfg = SpectralConfiguration::uppers(&pts.iter().map(|&(x, y)| c(x, y)).collect::<Vec<_>>());
        let r = correlation(regime, &cfg).unwrap();
        prop_assert!(r >= -1e-10, "{regime:?}: {r}");
    }

    #[test]
    fn exp_sum_splits_into_even_and_odd(m in 1usize..=100, re in -50.0..50.0f64, im in -50.0..50.0f64) {
        let t = c(re, im);
        let scale = c(t.norm(), 0.0);
        let e = scaled_partial_exp(PartialExpKind::Exp, m, t, scale).unwrap().value;
        let ch = scaled_partial_exp(PartialExpKind::Cosh, m, t, scale).unwrap().value;
        let sh = scaled_partial_exp(PartialExpKind::Sinh, m, t, scale).unwrap().value;
        prop_assert!((e - ch - sh).norm() <= 1e-12 * e.norm().max(ch.norm()).max(sh.norm()));
    }

    #[test]
    fn partial_exp_commutes_with_conjugation(m in 1usize..=60, re in -30.0..30.0f64, im in -30.0..30.0f64) {
        let t = c(re, im);
        let scale = c(t.norm(), 0.0);
        for kind in [PartialExpKind::Exp, PartialExpKind::Cosh, PartialExpKind::Sinh] {
            let a = scaled_partial_exp(kind, m, t, scale).unwrap().value;
            let b = scaled_partial_exp(kind, m, t.conj(), scale).unwrap().value;
            prop_assert!((a.conj() - b).norm() <= 1e-13 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn scaled_exp_sum_is_an_upper_incomplete_gamma(m in 1usize..=100, t in 0.0..300.0f64) {
        let v = scaled_partial_exp(PartialExpKind::Exp, m, c(t, 0.0), c(t, 0.0)).unwrap().value.re;
        let q = regularized_gamma_q(2.0 * m as f64 - 1.0, t).unwrap();
        prop_assert!((v - q).abs() <= 1e-9, "{v} vs {q}");
    }

    #[test]
    fn complex_erfc_restricts_to_the_real_one(x in -6.0..26.0f64) {
        let z = erfc_complex(c(x, 0.0)).unwrap();
        let r = erfc_real(x);
        prop_assert!((z.re - r).abs() <= 1e-13 * r.max(1e-300) && z.im == 0.0);
    }

    #[test]
    fn histogram_counts_every_point_in_the_window(
        samples in prop::collection::vec(prop::collection::vec(((-3.0..3.0f64), (0.0..3.0f64)), 0..12), 1..30),
    ) {
        let window = Window::Plane { x_lo: -2.0, x_hi: 2.0, y_lo: 0.0, y_hi: 2.0, nx: 5, ny: 4 };
        let mut h = DensityHistogram::new(window).unwrap();
        let mut inside = 0u64;
        for s in &samples {
            let pts: Vec<Complex64> = s.iter().map(|&(x, y)| c(x, y)).collect();
            inside += pts.iter().filter(|z| (-2.0..2.0).contains(&z.re) && (0.0..2.0).contains(&z.im)).count() as u64;
            h.add_sample(pts);
        }
        prop_assert_eq!(h.total(), inside);
        prop_assert_eq!(h.samples, samples.len() as u64);
    }
}

#[test]
fn one_point_densities_are_nonnegative_on_a_grid() {
    let regime = KernelRegime::FiniteN { m: 5 };
    for i in 0..100 {
        let x = -5.0 + 0.1 * i as f64;
        assert!(correlation(regime, &SpectralConfiguration::reals(&[x])).unwrap() >= 0.0);
        assert!(correlation(regime, &SpectralConfiguration::uppers(&[c(x, 0.05 + 0.03 * i as f64)])).unwrap() >= 0.0);
    }
}

#[test]
fn grid_csv_is_deterministic() {
    let spec = GridSpec::plane(
        KernelRegime::RealEdge { u: 1.0 },
        Observable::R20,
        Axis::new(-3.0, 2.0, 9),
        Axis::new(-3.0, 2.0, 7),
    );
    let a = evaluate_grid(&spec).unwrap().to_csv();
    let b = evaluate_grid(&spec).unwrap().to_csv();
    assert_eq!(a, b);
}
