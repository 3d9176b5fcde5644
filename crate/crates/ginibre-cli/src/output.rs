//! Output files: CSV tables, JSON sidecars and gnuplot scripts.

use std::io::Write;
use std::path::{Path, PathBuf};

use ginibre::correlation::IMAGINARY_RESIDUE_TOLERANCE;
use ginibre::grid::GridSpec;
use ginibre::kernel::REAL_AXIS_TOLERANCE;
use ginibre::pfaffian::PIVOT_THRESHOLD;
use serde::Serialize;

use crate::error::CliError;

/// Numerical thresholds in force when a file was produced.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub imaginary_residue: f64,
    pub pivot_threshold: f64,
    pub real_axis: f64,
}

impl Tolerances {
    pub fn current() -> Self {
        Self {
            imaginary_residue: IMAGINARY_RESIDUE_TOLERANCE,
            pivot_threshold: PIVOT_THRESHOLD,
            real_axis: REAL_AXIS_TOLERANCE,
        }
    }
}

/// Sidecar path for a data file: same stem, `.json` extension.
pub fn sidecar_path(data: &Path) -> PathBuf {
    data.with_extension("json")
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

/// Writes `text` to `path`, or to standard output when there is no path.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// A gnuplot script that plots the CSV `data` next to it.
pub fn gnuplot_script(spec: &GridSpec, data: &Path, title: &str, x_label: &str, y_label: Option<&str>) -> String {
    let file = data.file_name().map_or_else(|| data.display().to_string(), |f| f.to_string_lossy().into_owned());
    let title = title.replace('"', "'");
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title \"{title}\"\n"));
    s.push_str(&format!("set xlabel \"{x_label}\"\n"));
    match (spec.y, y_label) {
        (None, _) => {
            s.push_str(&format!("set ylabel \"{}\"\n", spec.observable.name()));
            s.push_str(&format!("plot \"{file}\" using 1:2 skip 1 with lines notitle\n"));
        }
        (Some(_), label) => {
            s.push_str(&format!("set ylabel \"{}\"\n", label.unwrap_or("y")));
            s.push_str(&format!("set cblabel \"{}\"\n", spec.observable.name()));
            s.push_str("set view map\nset size ratio -1\n");
            s.push_str(&format!("plot \"{file}\" using 1:2:3 skip 1 with image notitle\n"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use ginibre::grid::{Axis, Observable};
    use ginibre::limits::KernelRegime;

    #[test]
    fn scripts_match_dimension() {
        let line = GridSpec::line(KernelRegime::OriginBulk, Observable::R20, Axis::new(-1.0, 1.0, 3));
        let s = gnuplot_script(&line, Path::new("out/a.csv"), "t", "x", None);
        assert!(s.contains("\"a.csv\" using 1:2 skip 1 with lines"));
        let plane = GridSpec::plane(KernelRegime::ComplexBulk, Observable::R02, line.x, line.x);
        let s = gnuplot_script(&plane, Path::new("b.csv"), "t", "x", Some("y"));
        assert!(s.contains("using 1:2:3 skip 1 with image"));
    }

    #[test]
    fn sidecar_sits_next_to_the_data() {
        assert_eq!(sidecar_path(Path::new("d/fig_1.csv")), PathBuf::from("d/fig_1.json"));
    }
}
