//! Correlation functions and kernel entries tabulated on one- and two-dimensional grids.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlation::{correlation, kernel_block, scalar_kernel, SpectralConfiguration};
use crate::error::{Error, Result};
use crate::kernel::Point;
use crate::limits::KernelRegime;

/// An evenly spaced axis `lo, lo + h, …, hi` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Domain(format!("{name} axis needs at least 2 steps, got {}", self.steps)));
        }
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo > self.hi {
            return Err(Error::Domain(format!("{name} axis range [{}, {}] is invalid", self.lo, self.hi)));
        }
        Ok(())
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.hi;
        }
        self.lo + i as f64 * (self.hi - self.lo) / (self.steps - 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|i| self.point(i))
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// Parses `lo:hi:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Domain(format!("axis must read lo:hi:steps, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let steps = parts[2].trim().parse().map_err(|_| bad())?;
        Ok(Axis { lo, hi, steps })
    }
}

/// One entry of a matrix kernel block, or the scalar kernel of a determinantal regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelEntry {
    Ds,
    S,
    IsPlusE,
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Re,
    Im,
}

/// What a grid tabulates.
///
/// With `a` the grid anchor, the grid coordinates map to arguments as follows.
///
/// | observable | 1-D coordinate `t` | 2-D coordinates `(x, y)` |
/// |---|---|---|
/// | `R10` | `R_{1,0}(t)` | not available |
/// | `R20` | `R_{2,0}(Re a + t, Re a)` | `R_{2,0}(x, y)` |
/// | `R01` | `R_{0,1}(a + it)` | `R_{0,1}(x + iy)` |
/// | `R11` | `R_{1,1}(Re a + t, a)` | `R_{1,1}(x, iy)` |
/// | `R02` | `R_{0,2}(a + t, a)` | `R_{0,2}(a + x + iy, a)` |
/// | kernel | `K(t, a)` | `K(x + iy, a)` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    R10,
    R01,
    R20,
    R11,
    R02,
    Kernel { entry: KernelEntry, part: Part },
}

impl Observable {
    /// `true` when the observable involves real points.
    pub fn has_real_points(&self) -> bool {
        matches!(self, Observable::R10 | Observable::R20 | Observable::R11)
    }

    pub fn name(&self) -> String {
        match self {
            Observable::R10 => "R_10".into(),
            Observable::R01 => "R_01".into(),
            Observable::R20 => "R_20".into(),
            Observable::R11 => "R_11".into(),
            Observable::R02 => "R_02".into(),
            Observable::Kernel { entry, part } => {
                let e = match entry {
                    KernelEntry::Ds => "ds",
                    KernelEntry::S => "s",
                    KernelEntry::IsPlusE => "is",
                    KernelEntry::Scalar => "k",
                };
                let p = match part {
                    Part::Re => "re",
                    Part::Im => "im",
                };
                format!("K:{e}:{p}")
            }
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// Accepts `R_10`, `R10`, `r10` and the like, or `K:<ds|s|is|k>[:<re|im>]`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let plain = lower.replace(['_', '{', '}', ','], "");
        let obs = match plain.as_str() {
            "r10" => Observable::R10,
            "r01" => Observable::R01,
            "r20" => Observable::R20,
            "r11" => Observable::R11,
            "r02" => Observable::R02,
            _ => {
                let parts: Vec<&str> = lower.split(':').collect();
                if parts.len() < 2 || parts.len() > 3 || parts[0] != "k" {
                    return Err(Error::Domain(format!("unknown observable {s:?}")));
                }
                let entry = match parts[1] {
                    "ds" => KernelEntry::Ds,
                    "s" => KernelEntry::S,
                    "is" => KernelEntry::IsPlusE,
                    "k" => KernelEntry::Scalar,
                    other => return Err(Error::Domain(format!("unknown kernel entry {other:?}"))),
                };
                let part = match parts.get(2).copied().unwrap_or("re") {
                    "re" => Part::Re,
                    "im" => Part::Im,
                    other => return Err(Error::Domain(format!("unknown part {other:?}"))),
                };
                Observable::Kernel { entry, part }
            }
        };
        Ok(obs)
    }
}

/// A regime, an observable and the axes to tabulate it on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub regime: KernelRegime,
    pub observable: Observable,
    pub x: Axis,
    pub y: Option<Axis>,
    #[serde(default)]
    pub anchor: Complex64,
}

impl GridSpec {
    pub fn line(regime: KernelRegime, observable: Observable, x: Axis) -> Self {
        Self {
            regime,
            observable,
            x,
            y: None,
            anchor: Complex64::new(0.0, 0.0),
        }
    }

    pub fn plane(regime: KernelRegime, observable: Observable, x: Axis, y: Axis) -> Self {
        Self {
            y: Some(y),
            ..Self::line(regime, observable, x)
        }
    }

    pub fn with_anchor(mut self, anchor: Complex64) -> Self {
        self.anchor = anchor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.regime.validate()?;
        self.x.validate("x")?;
        if let Some(y) = &self.y {
            y.validate("y")?;
        }
        if !self.anchor.re.is_finite() || !self.anchor.im.is_finite() {
            return Err(Error::Domain("anchor must be finite".into()));
        }
        let det = self.regime.is_determinantal();
        if det && self.observable.has_real_points() {
            return Err(Error::InvalidRegime(format!(
                "{} is determinantal; {} involves real points",
                self.regime.name(),
                self.observable.name()
            )));
        }
        if let Observable::Kernel { entry, .. } = self.observable {
            if det != (entry == KernelEntry::Scalar) {
                return Err(Error::InvalidRegime(format!(
                    "kernel entry {} does not exist in {}",
                    self.observable.name(),
                    self.regime.name()
                )));
            }
        }
        if self.observable == Observable::R10 && self.y.is_some() {
            return Err(Error::Domain("R_10 is tabulated on a 1-D grid only".into()));
        }
        Ok(())
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.x.steps * self.y.map_or(1, |y| y.steps)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates in output order: `y` outer, `x` inner.
    pub fn coordinates(&self) -> Vec<(f64, Option<f64>)> {
        match &self.y {
            None => self.x.points().map(|x| (x, None)).collect(),
            Some(y) => y.points().flat_map(|yv| self.x.points().map(move |x| (x, Some(yv)))).collect(),
        }
    }

    /// The observable at one grid point.
    pub fn value_at(&self, x: f64, y: Option<f64>) -> Result<f64> {
        let a = self.anchor;
        let c = Complex64::new;
        let cfg = match (self.observable, y) {
            (Observable::R10, None) => SpectralConfiguration::reals(&[x]),
            (Observable::R20, None) => SpectralConfiguration::reals(&[a.re + x, a.re]),
            (Observable::R20, Some(y)) => SpectralConfiguration::reals(&[x, y]),
            (Observable::R01, None) => SpectralConfiguration::uppers(&[a + c(0.0, x)]),
            (Observable::R01, Some(y)) => SpectralConfiguration::uppers(&[c(x, y)]),
            (Observable::R11, None) => SpectralConfiguration::new(vec![a.re + x], vec![a])?,
            (Observable::R11, Some(y)) => SpectralConfiguration::new(vec![x], vec![c(0.0, y)])?,
            (Observable::R02, None) => SpectralConfiguration::uppers(&[a + x, a]),
            (Observable::R02, Some(y)) => SpectralConfiguration::uppers(&[a + c(x, y), a]),
            (Observable::Kernel { entry, part }, y) => {
                let z = c(x, y.unwrap_or(0.0));
                let v = if entry == KernelEntry::Scalar {
                    scalar_kernel(self.regime, z, a)?
                } else {
                    let b = kernel_block(self.regime, Point::classify(z)?, Point::classify(a)?)?;
                    match entry {
                        KernelEntry::Ds => b.ds,
                        KernelEntry::S => b.s,
                        _ => b.is_plus_e,
                    }
                };
                return Ok(match part {
                    Part::Re => v.re,
                    Part::Im => v.im,
                });
            }
            (Observable::R10, Some(_)) => return Err(Error::Domain("R_10 is tabulated on a 1-D grid only".into())),
        };
        correlation(self.regime, &cfg)
    }
}

/// A tabulated grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridData {
    pub spec: GridSpec,
    pub rows: Vec<GridRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub x: f64,
    pub y: Option<f64>,
    pub value: f64,
}

/// Formats `v` as the shortest decimal that reads back to the same double.
pub fn format_number(v: f64) -> String {
    format!("{v:?}")
}

impl GridData {
    /// CSV with header `x,value` or `x,y,value`, rows in grid order.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.rows.len());
        out.push_str(if self.spec.y.is_some() { "x,y,value\n" } else { "x,value\n" });
        for r in &self.rows {
            out.push_str(&format_number(r.x));
            out.push(',');
            if let Some(y) = r.y {
                out.push_str(&format_number(y));
                out.push(',');
            }
            let _ = writeln!(out, "{}", format_number(r.value));
        }
        out
    }
}

/// Evaluates the grid in parallel. The first failing point aborts with its error.
///
/// ```
/// use ginibre::grid::{evaluate_grid, Axis, GridSpec, Observable};
/// use ginibre::limits::KernelRegime;
/// let spec = GridSpec::line(KernelRegime::OriginBulk, Observable::R10, Axis::new(-1.0, 1.0, 2));
/// let data = evaluate_grid(&spec).unwrap();
/// assert_eq!(data.to_csv().lines().count(), 3);
/// ```
pub fn evaluate_grid(spec: &GridSpec) -> Result<GridData> {
    spec.validate()?;
    let rows = spec
        .coordinates()
        .into_par_iter()
        .map(|(x, y)| spec.value_at(x, y).map(|value| GridRow { x, y, value }))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridData { spec: *spec, rows })
}
