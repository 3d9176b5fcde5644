use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How bin counts are turned into densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// Points per sample per unit length.
    PerLength,
    /// Points per sample per unit area.
    PerArea,
}

/// A rectangular histogram window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Window {
    /// `[lo, hi)` on the line, `bins` equal bins.
    Line { lo: f64, hi: f64, bins: usize },
    /// `[x_lo, x_hi) × [y_lo, y_hi)` with `nx × ny` equal cells.
    Plane {
        x_lo: f64,
        x_hi: f64,
        y_lo: f64,
        y_hi: f64,
        nx: usize,
        ny: usize,
    },
    /// Annuli `lo ≤ |z| < hi` with `bins` equal radial steps.
    Radial { lo: f64, hi: f64, bins: usize },
}

impl Window {
    pub fn bins(&self) -> usize {
        match *self {
            Window::Line { bins, .. } | Window::Radial { bins, .. } => bins,
            Window::Plane { nx, ny, .. } => nx * ny,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Window::Line { lo, hi, bins } | Window::Radial { lo, hi, bins } => lo < hi && bins >= 1 && lo.is_finite() && hi.is_finite(),
            Window::Plane { x_lo, x_hi, y_lo, y_hi, nx, ny } => {
                x_lo < x_hi && y_lo < y_hi && nx >= 1 && ny >= 1 && [x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite())
            }
        };
        if matches!(self, Window::Radial { lo, .. } if *lo < 0.0) {
            return Err(Error::EmptyWindow);
        }
        if ok {
            Ok(())
        } else {
            Err(Error::EmptyWindow)
        }
    }

    /// The bin holding `z`, if any.
    pub fn locate(&self, z: Complex64) -> Option<usize> {
        let idx = |v: f64, lo: f64, hi: f64, n: usize| -> Option<usize> {
            if v < lo || v >= hi {
                return None;
            }
            Some((((v - lo) / (hi - lo)) * n as f64).floor().min(n as f64 - 1.0) as usize)
        };
        match *self {
            Window::Line { lo, hi, bins } => idx(z.re, lo, hi, bins),
            Window::Radial { lo, hi, bins } => idx(z.norm(), lo, hi, bins),
            Window::Plane { x_lo, x_hi, y_lo, y_hi, nx, ny } => {
                let i = idx(z.re, x_lo, x_hi, nx)?;
                let j = idx(z.im, y_lo, y_hi, ny)?;
                Some(j * nx + i)
            }
        }
    }

    /// The bin centre, as a point of the plane.
    pub fn center(&self, bin: usize) -> Complex64 {
        match *self {
            Window::Line { lo, hi, bins } | Window::Radial { lo, hi, bins } => {
                Complex64::new(lo + (bin as f64 + 0.5) * (hi - lo) / bins as f64, 0.0)
            }
            Window::Plane { x_lo, x_hi, y_lo, y_hi, nx, ny } => {
                let (i, j) = (bin % nx, bin / nx);
                Complex64::new(
                    x_lo + (i as f64 + 0.5) * (x_hi - x_lo) / nx as f64,
                    y_lo + (j as f64 + 0.5) * (y_hi - y_lo) / ny as f64,
                )
            }
        }
    }

    /// The bin boundaries `[a, b)` along the binned coordinate (for `Plane`, the `x` edges).
    pub fn edges(&self, bin: usize) -> (f64, f64) {
        match *self {
            Window::Line { lo, hi, bins } | Window::Radial { lo, hi, bins } => {
                let w = (hi - lo) / bins as f64;
                (lo + bin as f64 * w, lo + (bin + 1) as f64 * w)
            }
            Window::Plane { x_lo, x_hi, nx, .. } => {
                let w = (x_hi - x_lo) / nx as f64;
                let i = bin % nx;
                (x_lo + i as f64 * w, x_lo + (i + 1) as f64 * w)
            }
        }
    }

    /// Length, area or annulus area of a bin.
    pub fn measure(&self, bin: usize) -> f64 {
        match *self {
            Window::Line { lo, hi, bins } => (hi - lo) / bins as f64,
            Window::Plane { x_lo, x_hi, y_lo, y_hi, nx, ny } => (x_hi - x_lo) * (y_hi - y_lo) / (nx * ny) as f64,
            Window::Radial { .. } => {
                let (a, b) = self.edges(bin);
                std::f64::consts::PI * (b * b - a * a)
            }
        }
    }

    fn normalization(&self) -> Normalization {
        match self {
            Window::Line { .. } => Normalization::PerLength,
            _ => Normalization::PerArea,
        }
    }
}

/// Binned counts of points per sample, with per-bin sums of squares for standard errors.
///
/// Merging is associative, so partial histograms from parallel workers combine to the same
/// counts in any order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityHistogram {
    pub window: Window,
    pub counts: Vec<u64>,
    pub squares: Vec<u64>,
    pub samples: u64,
    pub normalization: Normalization,
}

impl DensityHistogram {
    pub fn new(window: Window) -> Result<Self> {
        window.validate()?;
        let n = window.bins();
        Ok(Self {
            window,
            counts: vec![0; n],
            squares: vec![0; n],
            samples: 0,
            normalization: window.normalization(),
        })
    }

    /// Adds the points of one sample.
    pub fn add_sample<I: IntoIterator<Item = Complex64>>(&mut self, points: I) {
        let mut local: Vec<(usize, u64)> = Vec::new();
        for z in points {
            if let Some(b) = self.window.locate(z) {
                match local.iter_mut().find(|(k, _)| *k == b) {
                    Some((_, c)) => *c += 1,
                    None => local.push((b, 1)),
                }
            }
        }
        for (b, c) in local {
            self.counts[b] += c;
            self.squares[b] += c * c;
        }
        self.samples += 1;
    }

    pub fn merge(&mut self, other: &DensityHistogram) -> Result<()> {
        if self.window != other.window {
            return Err(Error::Dimension("cannot merge histograms over different windows".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.squares.iter_mut().zip(&other.squares) {
            *a += b;
        }
        self.samples += other.samples;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Estimated density in `bin`.
    pub fn density(&self, bin: usize) -> f64 {
        self.counts[bin] as f64 / (self.samples as f64 * self.window.measure(bin))
    }

    /// Standard error of [`density`](Self::density), from the per-sample variance of the count.
    pub fn standard_error(&self, bin: usize) -> f64 {
        let k = self.samples as f64;
        let mean = self.counts[bin] as f64 / k;
        let var = (self.squares[bin] as f64 / k - mean * mean).max(0.0) * k / (k - 1.0).max(1.0);
        (var / k).sqrt() / self.window.measure(bin)
    }

    /// CSV with a header: bin centre(s), count, density estimate, standard error.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let planar = matches!(self.window, Window::Plane { .. });
        out.push_str(if planar { "x,y,count,density,std_error\n" } else { "x,count,density,std_error\n" });
        for b in 0..self.counts.len() {
            let c = self.window.center(b);
            if planar {
                let _ = write!(out, "{},{},", c.re, c.im);
            } else {
                let _ = write!(out, "{},", c.re);
            }
            let _ = writeln!(out, "{},{},{}", self.counts[b], self.density(b), self.standard_error(b));
        }
        out
    }
}

/// Histogram of the points that `points` extracts from each sample.
///
/// Fails with [`Error::EmptyWindow`] when the window is degenerate or receives no point.
pub fn accumulate_density<S, F, I>(samples: &[S], window: Window, points: F) -> Result<DensityHistogram>
where
    F: Fn(&S) -> I,
    I: IntoIterator<Item = Complex64>,
{
    let mut h = DensityHistogram::new(window)?;
    for s in samples {
        h.add_sample(points(s));
    }
    if h.total() == 0 {
        return Err(Error::EmptyWindow);
    }
    Ok(h)
}

/// Histogram of `|z|` over annuli, normalized per unit area.
pub fn accumulate_radial(samples: &[Vec<Complex64>], lo: f64, hi: f64, bins: usize) -> Result<DensityHistogram> {
    accumulate_density(samples, Window::Radial { lo, hi, bins }, |s| s.to_vec())
}
