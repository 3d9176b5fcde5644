//! Monte Carlo sampling of real and complex Gaussian matrices and their eigenvalue statistics.

mod histogram;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use histogram::{accumulate_density, accumulate_radial, DensityHistogram, Normalization, Window};

/// Largest matrix size accepted by the samplers.
pub const MAX_SAMPLE_SIZE: usize = 64;
/// Largest number of samples in one batch.
pub const MAX_SAMPLE_COUNT: usize = 1_000_000;
/// An eigenvalue is real when `|Im λ| ≤ REALNESS_TOLERANCE·√n·‖Y‖_F`.
pub const REALNESS_TOLERANCE: f64 = 1e-7;
/// Fraction of failed eigensolves tolerated before a batch is rejected.
pub const FAILURE_CAP: f64 = 1e-4;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// The eigenvalues of one real Gaussian matrix, split into real ones and upper representatives
/// of conjugate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSample {
    pub n: usize,
    pub reals: Vec<f64>,
    pub pairs: Vec<Complex64>,
    pub seed: u64,
    pub index: u64,
}

/// The eigenvalues of one complex Gaussian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexEigenSample {
    pub n: usize,
    pub eigenvalues: Vec<Complex64>,
    pub seed: u64,
    pub index: u64,
}

/// Samples in index order, and how many matrices were dropped because the eigensolver failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch<T> {
    pub samples: Vec<T>,
    pub failures: usize,
}

/// The random stream of sample `index`: independent of every other index and of thread count.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_request(n: usize, count: usize) -> Result<()> {
    if n == 0 || n > MAX_SAMPLE_SIZE {
        return Err(Error::Domain(format!("matrix size must lie in 1..={MAX_SAMPLE_SIZE}, got {n}")));
    }
    if count > MAX_SAMPLE_COUNT {
        return Err(Error::Domain(format!("at most {MAX_SAMPLE_COUNT} samples per batch, got {count}")));
    }
    Ok(())
}

/// A matrix with i.i.d. standard normal entries.
pub fn ginoe_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng))
}

/// A matrix with i.i.d. complex normal entries whose real and imaginary parts have variance ½.
pub fn ginue_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(s * re, s * im)
    })
}

/// Splits the spectrum of a real matrix into real eigenvalues and upper representatives.
///
/// Eigenvalues within `tol` of the axis are real. The others are paired greedily: after
/// sorting by real part (ties by `|Im|`), each upper eigenvalue takes the nearest unmatched
/// conjugate of a lower one, and the pair is represented by their average. A leftover
/// eigenvalue, which can only occur when `tol` splits a near-real pair, is counted as real.
pub fn classify_spectrum(eigs: &[Complex64], tol: f64) -> (Vec<f64>, Vec<Complex64>) {
    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for &z in eigs {
        if z.im.abs() <= tol {
            reals.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z.conj());
        }
    }
    let key = |a: &Complex64, b: &Complex64| a.re.total_cmp(&b.re).then(a.im.abs().total_cmp(&b.im.abs()));
    upper.sort_by(key);
    lower.sort_by(key);
    let mut used = vec![false; lower.len()];
    let mut pairs = Vec::with_capacity(upper.len());
    for z in upper {
        let best = lower
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|(_, a), (_, b)| (**a - z).norm().total_cmp(&(**b - z).norm()));
        match best {
            Some((j, w)) => {
                used[j] = true;
                pairs.push(0.5 * (z + w));
            }
            None => reals.push(z.re),
        }
    }
    for (j, w) in lower.iter().enumerate() {
        if !used[j] {
            reals.push(w.re);
        }
    }
    reals.sort_by(f64::total_cmp);
    (reals, pairs)
}

fn ginoe_one(n: usize, seed: u64, index: u64, realness: f64) -> Option<EigenSample> {
    let mut rng = sample_rng(seed, index);
    let y = ginoe_matrix(n, &mut rng);
    let scale = y.norm();
    let schur = Schur::try_new(y, SCHUR_EPS, SCHUR_MAX_ITER)?;
    let eigs: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    let tol = realness * (n as f64).sqrt() * scale;
    let (reals, pairs) = classify_spectrum(&eigs, tol);
    Some(EigenSample {
        n,
        reals,
        pairs,
        seed,
        index,
    })
}

fn finish<T>(results: Vec<Option<T>>) -> Result<SampleBatch<T>> {
    let total = results.len();
    let samples: Vec<T> = results.into_iter().flatten().collect();
    let failures = total - samples.len();
    if total > 0 && failures as f64 > FAILURE_CAP * total as f64 {
        return Err(Error::EigensolverFailure);
    }
    Ok(SampleBatch { samples, failures })
}

/// `count` real Ginibre matrices of size `n`, sampled in parallel with per-index streams.
///
/// ```
/// use ginibre::montecarlo::sample_ginoe;
/// let batch = sample_ginoe(3, 10, 7).unwrap();
/// for s in &batch.samples {
///     assert_eq!(s.reals.len() + 2 * s.pairs.len(), 3);
/// }
/// ```
pub fn sample_ginoe(n: usize, count: usize, seed: u64) -> Result<SampleBatch<EigenSample>> {
    sample_ginoe_with_tolerance(n, count, seed, REALNESS_TOLERANCE)
}

/// As [`sample_ginoe`] with a custom realness tolerance factor.
pub fn sample_ginoe_with_tolerance(n: usize, count: usize, seed: u64, realness: f64) -> Result<SampleBatch<EigenSample>> {
    check_request(n, count)?;
    let results: Vec<Option<EigenSample>> = (0..count as u64)
        .into_par_iter()
        .map(|i| ginoe_one(n, seed, i, realness))
        .collect();
    finish(results)
}

fn ginue_one(n: usize, seed: u64, index: u64) -> Option<ComplexEigenSample> {
    let mut rng = sample_rng(seed, index);
    let y = ginue_matrix(n, &mut rng);
    let schur = Schur::try_new(y, SCHUR_EPS, SCHUR_MAX_ITER)?;
    let eigenvalues = schur.eigenvalues()?.iter().copied().collect();
    Some(ComplexEigenSample {
        n,
        eigenvalues,
        seed,
        index,
    })
}

/// `count` complex Ginibre matrices of size `n`.
pub fn sample_ginue(n: usize, count: usize, seed: u64) -> Result<SampleBatch<ComplexEigenSample>> {
    check_request(n, count)?;
    let results: Vec<Option<ComplexEigenSample>> =
        (0..count as u64).into_par_iter().map(|i| ginue_one(n, seed, i)).collect();
    finish(results)
}

/// Mean and standard error of the number of real eigenvalues per sample.
pub fn real_count_statistics(samples: &[EigenSample]) -> (f64, f64) {
    let k = samples.len() as f64;
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().map(|s| s.reals.len() as f64).sum::<f64>() / k;
    let var = samples.iter().map(|s| (s.reals.len() as f64 - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    (mean, (var / k).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_by_one_is_real() {
        let b = sample_ginoe(1, 50, 3).unwrap();
        assert!(b.samples.iter().all(|s| s.reals.len() == 1 && s.pairs.is_empty()));
    }

    #[test]
    fn parity_and_upper_representatives() {
        let b = sample_ginoe(7, 300, 11).unwrap();
        for s in &b.samples {
            assert_eq!(s.reals.len() % 2, 1);
            assert_eq!(s.reals.len() + 2 * s.pairs.len(), 7);
            assert!(s.pairs.iter().all(|z| z.im > 0.0));
        }
    }

    #[test]
    fn reproducible_and_order_independent() {
        let a = sample_ginoe(5, 64, 42).unwrap();
        let b = sample_ginoe(5, 64, 42).unwrap();
        assert_eq!(a, b);
        let single = ginoe_one(5, 42, 17, REALNESS_TOLERANCE).unwrap();
        assert_eq!(a.samples[17], single);
    }

    #[test]
    fn classification_pairs_conjugates() {
        let eigs = [
            Complex64::new(1.0, 2.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(1.0, -2.0),
            Complex64::new(-3.0, 1e-12),
        ];
        let (reals, pairs) = classify_spectrum(&eigs, 1e-9);
        assert_eq!(reals, vec![-3.0, 0.5]);
        assert_eq!(pairs, vec![Complex64::new(1.0, 2.0)]);
    }

    #[test]
    fn single_complex_entry_is_the_eigenvalue() {
        let b = sample_ginue(1, 5, 9).unwrap();
        for s in &b.samples {
            let mut rng = sample_rng(9, s.index);
            let y = ginue_matrix(1, &mut rng);
            assert_eq!(s.eigenvalues[0], y[(0, 0)]);
        }
    }

    #[test]
    fn two_by_two_real_count() {
        let b = sample_ginoe(2, 20_000, 5).unwrap();
        let (mean, se) = real_count_statistics(&b.samples);
        assert!((mean - 2f64.sqrt()).abs() < 4.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn realness_tolerance_plateau() {
        let a = sample_ginoe(8, 10_000, 77).unwrap();
        let b = sample_ginoe_with_tolerance(8, 10_000, 77, REALNESS_TOLERANCE / 10.0).unwrap();
        let (ma, se) = real_count_statistics(&a.samples);
        let (mb, _) = real_count_statistics(&b.samples);
        assert!((ma - mb).abs() < se, "{ma} vs {mb} (se {se})");
    }

    #[test]
    fn complex_entries_have_unit_mean_square() {
        // |λ|² of a 1 × 1 complex Ginibre matrix is exponential with mean 1, density e^{−|γ|²}/π.
        let b = sample_ginue(1, 20_000, 13).unwrap();
        let r2: Vec<f64> = b.samples.iter().map(|s| s.eigenvalues[0].norm_sqr()).collect();
        let mean = r2.iter().sum::<f64>() / r2.len() as f64;
        let se = 1.0 / (r2.len() as f64).sqrt();
        assert!((mean - 1.0).abs() < 4.0 * se, "{mean}");
        let inside = r2.iter().filter(|&&v| v < 1.0).count() as f64 / r2.len() as f64;
        assert!((inside - (1.0 - (-1.0f64).exp())).abs() < 0.015, "{inside}");
    }
}
