//! The subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use ginibre::correlation::{complex_density, real_density};
use ginibre::figures::{self, FigurePreset};
use ginibre::grid::{evaluate_grid, format_number, Axis, GridSpec, Observable};
use ginibre::limits::{finite_to_limit_distance, KernelRegime};
use ginibre::montecarlo::{
    accumulate_density, real_count_statistics, sample_ginoe, sample_ginue, DensityHistogram, Window,
};
use ginibre::validate::{run_suite, Suite, ValidationOptions};
use ginibre::{Complex64, VERSION};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{emit, gnuplot_script, sidecar_path, write_json, write_text, Tolerances};
use crate::settings::Settings;

/// Largest `M` accepted by `converge`.
pub const MAX_CONVERGE_ORDER: usize = 512;
/// Distances below this are treated as converged when judging monotonicity.
pub const DISTANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Serialize)]
struct GridSidecar<'a> {
    command: &'static str,
    version: &'static str,
    preset: Option<&'a str>,
    regime: KernelRegime,
    regime_name: &'static str,
    #[serde(rename = "M")]
    m: Option<usize>,
    observable: String,
    x: Axis,
    y: Option<Axis>,
    anchor: Complex64,
    points: usize,
    tolerances: Tolerances,
    wall_time_seconds: f64,
}

fn regime_order(regime: KernelRegime) -> Option<usize> {
    match regime {
        KernelRegime::FiniteN { m } => Some(m),
        _ => None,
    }
}

/// The grid an `eval` call describes, and the builtin preset it started from, if any.
pub fn resolve_grid(settings: &Settings, preset: Option<&str>) -> Result<(GridSpec, Option<FigurePreset>), CliError> {
    let builtin = preset.and_then(|p| figures::preset(p).ok());
    let regime = match (settings.has("regime"), &builtin) {
        (false, Some(b)) => b.spec.regime,
        _ => settings.regime()?,
    };
    let observable = match (settings.get::<String>("observable")?, &builtin) {
        (Some(s), _) => s.parse::<Observable>()?,
        (None, Some(b)) => b.spec.observable,
        (None, None) => return Err(CliError::Input("missing --observable".into())),
    };
    let (x, y) = match (settings.axes()?, &builtin) {
        (Some(axes), _) => axes,
        (None, Some(b)) => (b.spec.x, b.spec.y),
        (None, None) => return Err(CliError::Input("missing --grid".into())),
    };
    let anchor = if settings.has("anchor-re") || settings.has("anchor-im") {
        settings.anchor()?
    } else {
        builtin.map_or(Complex64::new(0.0, 0.0), |b| b.spec.anchor)
    };
    let spec = GridSpec { regime, observable, x, y, anchor };
    spec.validate()?;
    Ok((spec, builtin))
}

fn write_grid(
    spec: &GridSpec,
    out: Option<&Path>,
    preset: Option<&str>,
    labels: Option<(&str, &str, Option<&str>)>,
    gnuplot: bool,
) -> Result<(), CliError> {
    let start = Instant::now();
    let data = evaluate_grid(spec)?;
    let seconds = start.elapsed().as_secs_f64();
    emit(out, &data.to_csv())?;
    let Some(out) = out else {
        return Ok(());
    };
    let sidecar = GridSidecar {
        command: "eval",
        version: VERSION,
        preset,
        regime: spec.regime,
        regime_name: spec.regime.name(),
        m: regime_order(spec.regime),
        observable: spec.observable.name(),
        x: spec.x,
        y: spec.y,
        anchor: spec.anchor,
        points: spec.len(),
        tolerances: Tolerances::current(),
        wall_time_seconds: seconds,
    };
    write_json(&sidecar_path(out), &sidecar)?;
    if gnuplot {
        let observable = spec.observable.name();
        let (title, xl, yl) = labels.unwrap_or((observable.as_str(), "x", spec.y.map(|_| "y")));
        write_text(&out.with_extension("gp"), &gnuplot_script(spec, out, title, xl, yl))?;
    }
    Ok(())
}

pub fn eval(settings: &Settings, preset: Option<&str>, gnuplot: bool) -> Result<(), CliError> {
    let (spec, builtin) = resolve_grid(settings, preset)?;
    let out: Option<PathBuf> = settings.get("out")?;
    if gnuplot && out.is_none() {
        return Err(CliError::Input("--gnuplot needs --out".into()));
    }
    let labels = builtin.as_ref().map(|b| (b.title, b.x_label, b.y_label));
    write_grid(&spec, out.as_deref(), preset, labels, gnuplot)
}

#[derive(Debug, Serialize)]
struct FigureIndexEntry {
    id: &'static str,
    title: &'static str,
    csv: String,
    points: usize,
}

pub fn figures(settings: &Settings) -> Result<(), CliError> {
    let which: String = settings.get("preset")?.unwrap_or_else(|| "all".to_string());
    let dir: PathBuf = settings.get("out")?.unwrap_or_else(|| PathBuf::from("figures"));
    let chosen = if which.trim().eq_ignore_ascii_case("all") {
        figures::presets()
    } else {
        vec![figures::preset(&which)?]
    };
    let mut index = Vec::new();
    for p in &chosen {
        let file = format!("{}.csv", p.id.replace(':', "_"));
        let path = dir.join(&file);
        write_grid(&p.spec, Some(&path), Some(p.id), Some((p.title, p.x_label, p.y_label)), true)?;
        eprintln!("{}: {} points -> {}", p.id, p.spec.len(), path.display());
        index.push(FigureIndexEntry { id: p.id, title: p.title, csv: file, points: p.spec.len() });
    }
    write_json(&dir.join("index.json"), &index)
}

pub fn validate(settings: &Settings) -> Result<(), CliError> {
    let suite: Suite = settings.get::<String>("suite")?.unwrap_or_else(|| "all".into()).parse()?;
    let mut options = ValidationOptions::default();
    if let Some(seed) = settings.get("seed")? {
        options.seed = seed;
    }
    if let Some(budget) = settings.get("samples")? {
        options = options.with_budget(budget)?;
    }
    let report = run_suite(suite, &options)?;
    for c in &report.criteria {
        let passed = c.checks.iter().filter(|k| k.pass).count();
        println!(
            "criterion {:>2} {:<48} {} ({} of {} checks) [{:.1} s]",
            c.criterion,
            c.title,
            if c.pass() { "PASS" } else { "FAIL" },
            passed,
            c.checks.len(),
            c.seconds
        );
        for k in c.checks.iter().filter(|k| !k.pass) {
            println!("    failed: {} (measured {:e}, target {:e}, tolerance {:e})", k.name, k.measured, k.target, k.tolerance);
        }
    }
    if let Some(out) = settings.get::<PathBuf>("out")? {
        write_json(&out, &report)?;
    }
    if report.pass() {
        Ok(())
    } else {
        let failed = report.checks().filter(|k| !k.pass).count();
        Err(CliError::Failure(format!("suite {}: {failed} check(s) failed", suite.name())))
    }
}

/// Parses a comma-separated ascending list of orders.
pub fn parse_orders(text: &str) -> Result<Vec<usize>, CliError> {
    let orders = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| CliError::Input(format!("invalid M {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if orders.is_empty() || orders.contains(&0) {
        return Err(CliError::Input("M list must hold positive orders".into()));
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Input(format!("M list must be strictly ascending, got {text:?}")));
    }
    if let Some(&m) = orders.iter().find(|&&m| m > MAX_CONVERGE_ORDER) {
        return Err(CliError::Input(format!("M = {m} exceeds the maximum of {MAX_CONVERGE_ORDER}")));
    }
    Ok(orders)
}

/// Pairs of local coordinates on which finite and limiting kernels are compared.
fn comparison_pairs(regime: KernelRegime, axes: Option<(Axis, Option<Axis>)>, anchor: Complex64) -> Vec<(Complex64, Complex64)> {
    let c = Complex64::new;
    match axes {
        Some((x, None)) => x.points().map(|t| (c(t, 0.0), anchor)).collect(),
        Some((x, Some(y))) => y.points().flat_map(|v| x.points().map(move |t| (c(t, v), anchor))).collect(),
        None if regime.is_determinantal() => {
            (0..9).map(|k| -2.0 + 0.5 * k as f64).map(|a| (c(a, 0.3), c(-0.5 * a, 0.6))).collect()
        }
        None => (0..9).map(|k| -2.0 + 0.5 * k as f64).map(|a| (c(a, 0.0), c(-0.5 * a, 0.0))).collect(),
    }
}

/// Density at the centre of the window: real density on the real line, complex density otherwise.
fn centre_density(regime: KernelRegime, centre: Complex64) -> Result<f64, CliError> {
    Ok(if regime.is_determinantal() || centre.im != 0.0 {
        complex_density(regime, centre)?
    } else {
        real_density(regime, centre.re)?
    })
}

#[derive(Debug, Serialize)]
struct ConvergeSidecar {
    command: &'static str,
    version: &'static str,
    regime: KernelRegime,
    regime_name: &'static str,
    u: Complex64,
    orders: Vec<usize>,
    pairs: usize,
    distances: Vec<f64>,
    densities: Vec<f64>,
    limit_density: f64,
    monotone: bool,
    tolerances: Tolerances,
    wall_time_seconds: f64,
}

pub fn converge(settings: &Settings) -> Result<(), CliError> {
    let regime = settings.regime()?;
    if matches!(regime, KernelRegime::FiniteN { .. } | KernelRegime::ComplexGinibreFinite { .. }) {
        return Err(CliError::Input(format!("{} is not a scaling limit", regime.name())));
    }
    let orders = parse_orders(&settings.require::<String>("M")?)?;
    let u = settings.u(Complex64::new(0.0, 0.0))?;
    let centre_u = match regime {
        KernelRegime::RealEdge { u } => Complex64::new(u, 0.0),
        KernelRegime::ComplexEdge { u: e } | KernelRegime::ComplexGinibreEdge { u: e } => e,
        _ => u,
    };
    let pairs = comparison_pairs(regime, settings.axes()?, settings.anchor()?);
    let start = Instant::now();
    let mut distances = Vec::with_capacity(orders.len());
    let mut densities = Vec::with_capacity(orders.len());
    for &m in &orders {
        distances.push(finite_to_limit_distance(regime, u, m, &pairs)?);
        let n = 2 * m;
        let finite = match regime {
            KernelRegime::ComplexGinibreBulk | KernelRegime::ComplexGinibreEdge { .. } => {
                KernelRegime::ComplexGinibreFinite { n }
            }
            _ => KernelRegime::FiniteN { m },
        };
        densities.push(centre_density(finite, centre_u * (n as f64).sqrt())?);
    }
    let limit_density = match regime {
        // The bulk limits are translation invariant; evaluate them off the real axis.
        KernelRegime::ComplexBulk | KernelRegime::ComplexGinibreBulk => complex_density(regime, Complex64::new(0.0, 1.0))?,
        KernelRegime::ComplexEdge { .. } | KernelRegime::ComplexGinibreEdge { .. } => {
            complex_density(regime, Complex64::new(0.0, 0.0))?
        }
        _ => real_density(regime, 0.0)?,
    };
    let monotone = distances.windows(2).all(|w| w[1] < w[0] || w[1].max(w[0]) < DISTANCE_FLOOR);
    let mut csv = String::from("M,distance,density\n");
    for ((m, d), rho) in orders.iter().zip(&distances).zip(&densities) {
        csv.push_str(&format!("{m},{},{}\n", format_number(*d), format_number(*rho)));
    }
    let out: Option<PathBuf> = settings.get("out")?;
    emit(out.as_deref(), &csv)?;
    if let Some(out) = out {
        let sidecar = ConvergeSidecar {
            command: "converge",
            version: VERSION,
            regime,
            regime_name: regime.name(),
            u: centre_u,
            orders,
            pairs: pairs.len(),
            distances,
            densities,
            limit_density,
            monotone,
            tolerances: Tolerances::current(),
            wall_time_seconds: start.elapsed().as_secs_f64(),
        };
        write_json(&sidecar_path(&out), &sidecar)?;
    }
    if !monotone {
        eprintln!("warning: distances do not decrease monotonically");
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SampleSidecar {
    command: &'static str,
    version: &'static str,
    ensemble: String,
    n: usize,
    samples: usize,
    seed: u64,
    observable: String,
    window: Window,
    failures: usize,
    mean_real_count: Option<f64>,
    mean_real_count_std_error: Option<f64>,
    wall_time_seconds: f64,
}

fn sample_window(observable: &str, axes: Option<(Axis, Option<Axis>)>) -> Result<Window, CliError> {
    let bins = |a: Axis| (a.lo, a.hi, a.steps);
    match (observable, axes) {
        ("radial", Some((r, None))) => {
            let (lo, hi, bins) = bins(r);
            Ok(Window::Radial { lo, hi, bins })
        }
        ("r10", Some((x, None))) => {
            let (lo, hi, bins) = bins(x);
            Ok(Window::Line { lo, hi, bins })
        }
        ("r01", Some((x, Some(y)))) => Ok(Window::Plane {
            x_lo: x.lo,
            x_hi: x.hi,
            y_lo: y.lo,
            y_hi: y.hi,
            nx: x.steps,
            ny: y.steps,
        }),
        (_, None) => Err(CliError::Input("missing --grid (histogram window lo:hi:bins)".into())),
        (o, _) => Err(CliError::Input(format!(
            "observable {o:?} does not fit the grid; use R_10 or radial with lo:hi:bins, R_01 with two axes"
        ))),
    }
}

pub fn sample(settings: &Settings) -> Result<(), CliError> {
    let ensemble = settings.get::<String>("ensemble")?.unwrap_or_else(|| "ginoe".into()).to_ascii_lowercase();
    let n: usize = settings.require("n")?;
    let count: usize = settings.get("samples")?.unwrap_or(10_000);
    let seed: u64 = settings.get("seed")?.unwrap_or(42);
    let observable = settings
        .get::<String>("observable")?
        .unwrap_or_else(|| "R_10".into())
        .replace('_', "")
        .to_ascii_lowercase();
    let window = sample_window(&observable, settings.axes()?)?;
    let start = Instant::now();
    let (hist, failures, real_count): (DensityHistogram, usize, Option<(f64, f64)>) = match ensemble.as_str() {
        "ginoe" | "real" => {
            let batch = sample_ginoe(n, count, seed)?;
            let stats = real_count_statistics(&batch.samples);
            let hist = match observable.as_str() {
                "r10" => accumulate_density(&batch.samples, window, |s| {
                    s.reals.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()
                })?,
                "r01" => accumulate_density(&batch.samples, window, |s| s.pairs.clone())?,
                _ => accumulate_density(&batch.samples, window, |s| {
                    let reals = s.reals.iter().map(|&x| Complex64::new(x, 0.0));
                    let pairs = s.pairs.iter().flat_map(|&z| [z, z.conj()]);
                    reals.chain(pairs).collect::<Vec<_>>()
                })?,
            };
            (hist, batch.failures, Some(stats))
        }
        "ginue" | "complex" => {
            if observable == "r10" {
                return Err(CliError::Input("complex Ginibre matrices have no real eigenvalues; use R_01 or radial".into()));
            }
            let batch = sample_ginue(n, count, seed)?;
            let hist = accumulate_density(&batch.samples, window, |s| s.eigenvalues.clone())?;
            (hist, batch.failures, None)
        }
        other => return Err(CliError::Input(format!("unknown ensemble {other:?}; expected ginoe or ginue"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let out: Option<PathBuf> = settings.get("out")?;
    emit(out.as_deref(), &hist.to_csv())?;
    if let Some(out) = out {
        let sidecar = SampleSidecar {
            command: "sample",
            version: VERSION,
            ensemble,
            n,
            samples: count,
            seed,
            observable,
            window,
            failures,
            mean_real_count: real_count.map(|r| r.0),
            mean_real_count_std_error: real_count.map(|r| r.1),
            wall_time_seconds: seconds,
        };
        write_json(&sidecar_path(&out), &sidecar)?;
    }
    Ok(())
}
