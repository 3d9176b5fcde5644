//! Layered settings: command-line flags over a preset section over top-level config keys.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use ginibre::grid::Axis;
use ginibre::limits::KernelRegime;
use ginibre::Complex64;
use toml::{Table, Value};

use crate::error::CliError;

/// A parsed config file.
#[derive(Debug, Default, Clone)]
pub struct Config {
    pub defaults: Table,
    pub presets: BTreeMap<String, Table>,
}

impl Config {
    /// Reads top-level `key = value` defaults and `[preset.<name>]` sections.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut defaults: Table =
            text.parse().map_err(|e: toml::de::Error| CliError::Input(format!("config: {}", e.message())))?;
        let mut presets = BTreeMap::new();
        if let Some(v) = defaults.remove("preset") {
            let Value::Table(t) = v else {
                return Err(CliError::Input("config: `preset` must be a table of sections".into()));
            };
            for (name, body) in t {
                let Value::Table(body) = body else {
                    return Err(CliError::Input(format!("config: preset {name:?} must be a section")));
                };
                presets.insert(name, body);
            }
        }
        Ok(Self { defaults, presets })
    }
}

/// Key lookup through an ordered list of tables, first hit wins.
#[derive(Debug, Clone)]
pub struct Settings {
    layers: Vec<Table>,
}

fn normalize(key: &str) -> String {
    key.replace('_', "-").to_ascii_lowercase()
}

fn as_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(as_text).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

impl Settings {
    /// `flags` are the command-line values; `preset` names a config section to place beneath them.
    pub fn new(flags: Table, config: &Config, preset: Option<&str>) -> Self {
        let mut layers = vec![flags];
        if let Some(t) = preset.and_then(|p| config.presets.get(p)) {
            layers.push(t.clone());
        }
        layers.push(config.defaults.clone());
        let layers = layers
            .into_iter()
            .map(|t| t.into_iter().map(|(k, v)| (normalize(&k), v)).collect())
            .collect();
        Self { layers }
    }

    pub fn raw(&self, key: &str) -> Option<String> {
        let key = normalize(key);
        self.layers.iter().find_map(|t| t.get(&key)).map(as_text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .trim()
                .parse()
                .map(Some)
                .map_err(|e| CliError::Input(format!("invalid value {s:?} for {key}: {e}"))),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or_else(|| CliError::Input(format!("missing --{key}")))
    }

    pub fn has(&self, key: &str) -> bool {
        self.raw(key).is_some()
    }

    fn complex(&self, re: &str, im: &str, default: Complex64) -> Result<Complex64, CliError> {
        Ok(Complex64::new(
            self.get(re)?.unwrap_or(default.re),
            self.get(im)?.unwrap_or(default.im),
        ))
    }

    /// `u` from `--u-re` and `--u-im`.
    pub fn u(&self, default: Complex64) -> Result<Complex64, CliError> {
        self.complex("u-re", "u-im", default)
    }

    pub fn anchor(&self) -> Result<Complex64, CliError> {
        self.complex("anchor-re", "anchor-im", Complex64::new(0.0, 0.0))
    }

    /// The kernel regime named by `--regime`, with its parameters.
    pub fn regime(&self) -> Result<KernelRegime, CliError> {
        let name: String = self.require("regime")?;
        let one = Complex64::new(1.0, 0.0);
        let regime = match name.trim().to_ascii_lowercase().as_str() {
            "finite" | "finite-n" => KernelRegime::FiniteN { m: self.require("M")? },
            "origin" | "bulk" | "real-bulk" => KernelRegime::OriginBulk,
            "real-edge" => KernelRegime::RealEdge { u: self.get("u-re")?.unwrap_or(1.0) },
            "complex-bulk" => KernelRegime::ComplexBulk,
            "complex-edge" => KernelRegime::ComplexEdge { u: self.u(Complex64::new(0.0, 1.0))? },
            "ginue" => KernelRegime::ComplexGinibreFinite { n: self.require("n")? },
            "ginue-bulk" => KernelRegime::ComplexGinibreBulk,
            "ginue-edge" => KernelRegime::ComplexGinibreEdge { u: self.u(one)? },
            other => {
                return Err(CliError::Input(format!(
                    "unknown regime {other:?}; expected finite, origin, real-edge, complex-bulk, complex-edge, \
                     ginue, ginue-bulk or ginue-edge"
                )))
            }
        };
        regime.validate()?;
        Ok(regime)
    }

    /// `--grid` as one axis `lo:hi:n` or two axes `lo:hi:n,lo:hi:n`.
    pub fn axes(&self) -> Result<Option<(Axis, Option<Axis>)>, CliError> {
        let Some(text) = self.raw("grid") else {
            return Ok(None);
        };
        parse_axes(&text).map(Some)
    }
}

pub fn parse_axes(text: &str) -> Result<(Axis, Option<Axis>), CliError> {
    let strip = |s: &str| {
        let s = s.trim();
        s.strip_prefix("x=").or_else(|| s.strip_prefix("y=")).unwrap_or(s).to_string()
    };
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [x] => Ok((strip(x).parse()?, None)),
        [x, y] => Ok((strip(x).parse()?, Some(strip(y).parse()?))),
        _ => Err(CliError::Input(format!("grid must be lo:hi:n or lo:hi:n,lo:hi:n, got {text:?}"))),
    }
}

/// Builds a table from `(key, value)` pairs, skipping absent values.
pub fn flag_table<'a>(pairs: impl IntoIterator<Item = (&'a str, Option<String>)>) -> Table {
    pairs
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), Value::String(v))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_preset_over_defaults() {
        let cfg = Config::parse(
            "regime = \"origin\"\nM = 10\n[preset.wide]\nregime = \"finite\"\ngrid = \"-8:8:5\"\n",
        )
        .unwrap();
        let s = Settings::new(flag_table([("M", Some("20".to_string()))]), &cfg, Some("wide"));
        assert_eq!(s.raw("regime").unwrap(), "finite");
        assert_eq!(s.get::<usize>("M").unwrap(), Some(20));
        assert_eq!(s.regime().unwrap(), KernelRegime::FiniteN { m: 20 });
        let s = Settings::new(Table::new(), &cfg, None);
        assert_eq!(s.regime().unwrap(), KernelRegime::OriginBulk);
        assert_eq!(s.get::<usize>("M").unwrap(), Some(10));
    }

    #[test]
    fn underscores_and_hyphens_are_interchangeable() {
        let cfg = Config::parse("u_re = 0.5").unwrap();
        let s = Settings::new(Table::new(), &cfg, None);
        assert_eq!(s.get::<f64>("u-re").unwrap(), Some(0.5));
    }

    #[test]
    fn axes() {
        let (x, y) = parse_axes("x=-1:1:3,y=0:2:5").unwrap();
        assert_eq!(x, Axis::new(-1.0, 1.0, 3));
        assert_eq!(y, Some(Axis::new(0.0, 2.0, 5)));
        assert!(parse_axes("1:2:3,1:2:3,1:2:3").is_err());
    }

    #[test]
    fn bad_regime_is_an_input_error() {
        let s = Settings::new(flag_table([("regime", Some("nope".into()))]), &Config::default(), None);
        assert!(matches!(s.regime(), Err(CliError::Input(_))));
        let s = Settings::new(flag_table([("regime", Some("finite".into()))]), &Config::default(), None);
        assert!(matches!(s.regime(), Err(CliError::Input(_))));
    }
}
