//! Named grids for the standard pictures of the limiting correlation functions.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Axis, GridSpec, Observable};
use crate::limits::KernelRegime;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigurePreset {
    /// Identifier such as `fig:1`.
    pub id: &'static str,
    pub title: &'static str,
    pub x_label: &'static str,
    pub y_label: Option<&'static str>,
    pub spec: GridSpec,
}

/// All presets, in identifier order.
pub fn presets() -> Vec<FigurePreset> {
    let bulk = KernelRegime::OriginBulk;
    let edge = KernelRegime::RealEdge { u: 1.0 };
    vec![
        FigurePreset {
            id: "fig:1",
            title: "R_{2,0} in the real bulk against r1 - r2",
            x_label: "r1 - r2",
            y_label: None,
            spec: GridSpec::line(bulk, Observable::R20, Axis::new(-6.0, 6.0, 241)),
        },
        FigurePreset {
            id: "fig:2",
            title: "R_{1,1}(r, s) in the real bulk against r - Re s and Im s",
            x_label: "r - Re s",
            y_label: Some("Im s"),
            spec: GridSpec::plane(bulk, Observable::R11, Axis::new(-4.0, 4.0, 81), Axis::new(0.05, 4.0, 80)),
        },
        FigurePreset {
            id: "fig:3",
            title: "Density of complex eigenvalues in the real bulk against Im s",
            x_label: "Im s",
            y_label: None,
            spec: GridSpec::line(bulk, Observable::R01, Axis::new(0.02, 4.0, 200)),
        },
        FigurePreset {
            id: "fig:4",
            title: "R_{0,2}(s, s') in the complex bulk against s - s'",
            x_label: "Re(s - s')",
            y_label: Some("Im(s - s')"),
            spec: GridSpec::plane(
                KernelRegime::ComplexBulk,
                Observable::R02,
                Axis::new(-3.0, 3.0, 61),
                Axis::new(-3.0, 3.0, 61),
            ),
        },
        FigurePreset {
            id: "fig:5",
            title: "Density of real eigenvalues at the real edge",
            x_label: "r",
            y_label: None,
            spec: GridSpec::line(edge, Observable::R10, Axis::new(-6.0, 6.0, 241)),
        },
        FigurePreset {
            id: "fig:6",
            title: "Density of complex eigenvalues at the real edge against Re s and Im s",
            x_label: "Re s",
            y_label: Some("Im s"),
            spec: GridSpec::plane(edge, Observable::R01, Axis::new(-6.0, 4.0, 101), Axis::new(0.05, 4.0, 80)),
        },
        FigurePreset {
            id: "fig:7",
            title: "R_{2,0}(r, r') at the real edge",
            x_label: "r",
            y_label: Some("r'"),
            spec: GridSpec::plane(edge, Observable::R20, Axis::new(-6.0, 4.0, 51), Axis::new(-6.0, 4.0, 51)),
        },
        FigurePreset {
            id: "fig:8",
            title: "Radial density at the complex edge u = i against Im s",
            x_label: "Im s",
            y_label: None,
            spec: GridSpec::line(
                KernelRegime::ComplexEdge { u: Complex64::new(0.0, 1.0) },
                Observable::R01,
                Axis::new(-4.0, 4.0, 161),
            ),
        },
    ]
}

/// Looks a preset up by identifier; `fig:3`, `fig3` and `3` all name the same one.
pub fn preset(id: &str) -> Result<FigurePreset> {
    let key = id.trim().trim_start_matches("fig").trim_start_matches(':');
    presets()
        .into_iter()
        .find(|p| p.id.trim_start_matches("fig:") == key)
        .ok_or_else(|| Error::Domain(format!("unknown preset {id:?}; expected fig:1 to fig:8")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_valid_presets() {
        let all = presets();
        assert_eq!(all.len(), 8);
        for p in &all {
            p.spec.validate().unwrap();
            assert_eq!(p.y_label.is_some(), p.spec.y.is_some());
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(preset("fig:4").unwrap().id, "fig:4");
        assert_eq!(preset("7").unwrap().id, "fig:7");
        assert_eq!(preset("fig5").unwrap().id, "fig:5");
        assert!(preset("fig:9").is_err());
    }
}
