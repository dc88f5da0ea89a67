//! JSON run configuration.
//!
//! ```json
//! {
//!   "model": { "kind": "double_track", "preset": "understeer" },
//!   "grid": {
//!     "speeds": [20.0, 40.0],
//!     "vertical_accels": [8.0, 9.81, 15.0],
//!     "longitudinal_accels": { "linspace": [-30.0, 20.0, 80] }
//!   },
//!   "harness": { "target_jerk": 1.0 },
//!   "output": { "dir": "out", "format": "both", "svg_slices": [[20.0, 9.81]] },
//!   "workers": "auto"
//! }
//! ```
//!
//! `model.kind` is one of `point_mass`, `double_track` or
//! `double_track_variable_aero`. A double-track model takes either a `preset`
//! (`understeer`, `oversteer`) or a full `params` block; the variable-aero
//! kind also accepts `lift_table` (`[[v m/s, c_l], ...]`) and `balance_table`
//! (`[[pitch rad, front share], ...]`). Every grid axis is a list or
//! `{"linspace": [start, stop, count]}`. Units: speeds in m/s, accelerations
//! in m/s². Unknown keys are rejected everywhere.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::maneuver::HarnessConfig;
use crate::model::ModelError;
use crate::models::{
    make_aero_variant, AnyModel, DoubleTrack, DoubleTrackConfig, PointMass, PointMassConfig,
};
use crate::sweep::digest_json;
use crate::types::{linspace, GridError, SweepGrid};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid `{key}`: {reason}")]
    Validation { key: String, reason: String },
}

impl ConfigError {
    fn invalid(key: impl Into<String>, reason: impl fmt::Display) -> Self {
        ConfigError::Validation {
            key: key.into(),
            reason: reason.to_string(),
        }
    }

    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { key, .. } => Some(key),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Understeer,
    Oversteer,
}

impl Preset {
    pub fn config(self) -> DoubleTrackConfig {
        match self {
            Preset::Understeer => DoubleTrackConfig::understeer(),
            Preset::Oversteer => DoubleTrackConfig::oversteer(),
        }
    }
}

/// Fully resolved model selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    PointMass {
        params: PointMassConfig,
    },
    DoubleTrack {
        params: DoubleTrackConfig,
    },
    DoubleTrackVariableAero {
        /// Base vehicle whose lift and balance are replaced by the tables.
        params: DoubleTrackConfig,
        lift_table: Vec<(f64, f64)>,
        balance_table: Vec<(f64, f64)>,
    },
}

impl ModelConfig {
    pub fn build(&self) -> Result<AnyModel, ModelError> {
        Ok(match self {
            ModelConfig::PointMass { params } => PointMass::new(params.clone())?.into(),
            ModelConfig::DoubleTrack { params } => DoubleTrack::new(params.clone())?.into(),
            ModelConfig::DoubleTrackVariableAero {
                params,
                lift_table,
                balance_table,
            } => {
                let cfg = make_aero_variant(params, lift_table.clone(), balance_table.clone())?;
                DoubleTrack::new(cfg)?.into()
            }
        })
    }

    pub fn point_mass(&self) -> Option<&PointMassConfig> {
        match self {
            ModelConfig::PointMass { params } => Some(params),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawModel {
    PointMass {
        #[serde(default)]
        params: Option<PointMassConfig>,
    },
    DoubleTrack {
        preset: Option<Preset>,
        params: Option<DoubleTrackConfig>,
    },
    DoubleTrackVariableAero {
        preset: Option<Preset>,
        params: Option<DoubleTrackConfig>,
        lift_table: Option<Vec<(f64, f64)>>,
        balance_table: Option<Vec<(f64, f64)>>,
    },
}

fn base_double_track(preset: Option<Preset>, params: Option<DoubleTrackConfig>) -> Result<DoubleTrackConfig, ConfigError> {
    match (preset, params) {
        (Some(_), Some(_)) => Err(ConfigError::invalid("model.preset", "give either `preset` or `params`, not both")),
        (None, Some(p)) => Ok(p),
        (preset, None) => Ok(preset.unwrap_or(Preset::Understeer).config()),
    }
}

impl RawModel {
    fn resolve(self) -> Result<ModelConfig, ConfigError> {
        let model = match self {
            RawModel::PointMass { params } => ModelConfig::PointMass {
                params: params.unwrap_or_default(),
            },
            RawModel::DoubleTrack { preset, params } => ModelConfig::DoubleTrack {
                params: base_double_track(preset, params)?,
            },
            RawModel::DoubleTrackVariableAero {
                preset,
                params,
                lift_table,
                balance_table,
            } => {
                let (lift, balance) = DoubleTrackConfig::variable_aero_tables();
                ModelConfig::DoubleTrackVariableAero {
                    params: base_double_track(preset, params)?,
                    lift_table: lift_table.unwrap_or(lift),
                    balance_table: balance_table.unwrap_or(balance),
                }
            }
        };
        if let Err(e) = model.build() {
            let key = match (&model, &e) {
                (ModelConfig::DoubleTrackVariableAero { .. }, ModelError::InvalidTable(_)) => "model.tables",
                _ => "model.params",
            };
            return Err(ConfigError::invalid(key, e));
        }
        Ok(model)
    }
}

/// One grid axis as written in the file.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawAxis {
    Values(Vec<f64>),
    Linspace(Linspace),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Linspace {
    linspace: (f64, f64, usize),
}

impl RawAxis {
    fn expand(self) -> Vec<f64> {
        match self {
            RawAxis::Values(v) => v,
            RawAxis::Linspace(Linspace {
                linspace: (start, stop, count),
            }) => linspace(start, stop, count),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    speeds: RawAxis,
    vertical_accels: RawAxis,
    longitudinal_accels: RawAxis,
}

impl RawGrid {
    fn resolve(self) -> Result<SweepGrid, ConfigError> {
        SweepGrid::new(
            self.speeds.expand(),
            self.vertical_accels.expand(),
            self.longitudinal_accels.expand(),
        )
        .map_err(|e| {
            let axis = match e {
                GridError::EmptyAxis { axis } | GridError::NonFinite { axis } | GridError::NotIncreasing { axis } => axis,
                _ => "speeds",
            };
            ConfigError::invalid(format!("grid.{axis}"), e)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExportFormat {
    #[default]
    Csv,
    Json,
    Both,
}

impl ExportFormat {
    pub fn csv(self) -> bool {
        matches!(self, ExportFormat::Csv | ExportFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, ExportFormat::Json | ExportFormat::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: ExportFormat,
    /// Write one ramp trace CSV per feasible cell.
    pub debug_trace: bool,
    /// `(v, a_z)` cross-sections rendered as SVG.
    pub svg_slices: Vec<(f64, f64)>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("gggv_out"),
            format: ExportFormat::Csv,
            debug_trace: false,
            svg_slices: Vec::new(),
        }
    }
}

/// Worker count, or `"auto"` for the available parallelism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    #[default]
    Auto,
    Count(usize),
}

impl Workers {
    pub fn resolve(self) -> usize {
        match self {
            Workers::Count(n) => n.max(1),
            Workers::Auto => std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl Serialize for Workers {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Workers::Auto => s.serialize_str("auto"),
            Workers::Count(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Workers {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(usize),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(n) => Ok(Workers::Count(n)),
            Raw::Name(s) if s == "auto" => Ok(Workers::Auto),
            Raw::Name(s) => Err(de::Error::custom(format!("workers must be a count or \"auto\", got {s:?}"))),
        }
    }
}

impl std::str::FromStr for Workers {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Workers::Auto);
        }
        s.parse::<usize>()
            .map(Workers::Count)
            .map_err(|_| format!("expected a worker count or \"auto\", got {s:?}"))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRunConfig {
    model: RawModel,
    grid: RawGrid,
    #[serde(default)]
    harness: HarnessConfig,
    #[serde(default)]
    output: OutputConfig,
    #[serde(default)]
    workers: Workers,
}

/// A validated run configuration with all defaults applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub grid: SweepGrid,
    pub harness: HarnessConfig,
    pub output: OutputConfig,
    pub workers: Workers,
}

impl RunConfig {
    /// Digest of everything that affects the computed diagram.
    pub fn hash(&self) -> String {
        digest_json(&(&self.model, &self.grid, &self.harness))
    }

    /// The configuration with every default written out.
    pub fn to_expanded_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable config") + "\n"
    }
}

/// Parses and validates a configuration document.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawRunConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let model = raw.model.resolve()?;
    let grid = raw.grid.resolve()?;
    if let Err(e) = raw.harness.validate() {
        return Err(ConfigError::invalid(format!("harness.{}", e.field), e.reason));
    }
    if raw.workers == Workers::Count(0) {
        return Err(ConfigError::invalid("workers", "must be at least 1"));
    }
    for &(v, a_z) in &raw.output.svg_slices {
        let a_x = grid.longitudinal_accels()[0];
        if grid.grid_index(v, a_z, a_x).is_err() {
            return Err(ConfigError::invalid(
                "output.svg_slices",
                format!("({v}, {a_z}) is not on the grid"),
            ));
        }
    }
    Ok(RunConfig {
        model,
        grid,
        harness: raw.harness,
        output: raw.output,
        workers: raw.workers,
    })
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "model": {"kind": "point_mass"},
        "grid": {"speeds": [30.0], "vertical_accels": [9.81], "longitudinal_accels": [0.0, 5.0]}
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config_str(MINIMAL).unwrap();
        assert_eq!(cfg.harness.target_jerk, 1.0);
        assert_eq!(cfg.harness.oversteer_threshold, 0.3);
        assert_eq!(cfg.model.point_mass(), Some(&PointMassConfig::default()));
        assert_eq!(cfg.workers, Workers::Auto);
        assert_eq!(cfg.output.format, ExportFormat::Csv);
    }

    #[test]
    fn decreasing_speeds_name_the_key() {
        let text = MINIMAL.replace("[30.0]", "[30.0, 20.0]");
        let err = parse_config_str(&text).unwrap_err();
        assert_eq!(err.key(), Some("grid.speeds"));
    }

    #[test]
    fn linspace_axis_expands() {
        let text = MINIMAL.replace("[0.0, 5.0]", r#"{"linspace": [-30.0, 20.0, 80]}"#);
        let cfg = parse_config_str(&text).unwrap();
        let ax = cfg.grid.longitudinal_accels();
        assert_eq!(ax.len(), 80);
        assert_eq!(ax[0], -30.0);
        assert_eq!(ax[79], 20.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace(r#""kind": "point_mass""#, r#""kind": "point_mass", "colour": 1"#);
        assert!(matches!(parse_config_str(&text), Err(ConfigError::Parse(m)) if m.contains("colour")));
        let text = MINIMAL.replacen('{', r#"{"harness": {"jerk": 1.0},"#, 1);
        assert!(matches!(parse_config_str(&text), Err(ConfigError::Parse(m)) if m.contains("jerk")));
    }

    #[test]
    fn harness_validation_names_the_field() {
        let text = MINIMAL.replacen('{', r#"{"harness": {"target_jerk": -1.0},"#, 1);
        assert_eq!(parse_config_str(&text).unwrap_err().key(), Some("harness.target_jerk"));
    }

    #[test]
    fn expanded_config_is_a_fixed_point() {
        for model in [
            r#"{"kind": "point_mass", "params": {"drag_accel": 1.5}}"#,
            r#"{"kind": "double_track", "preset": "oversteer"}"#,
            r#"{"kind": "double_track_variable_aero"}"#,
        ] {
            let text = MINIMAL.replace(r#"{"kind": "point_mass"}"#, model);
            let cfg = parse_config_str(&text).unwrap();
            let expanded = cfg.to_expanded_json();
            let again = parse_config_str(&expanded).unwrap();
            assert_eq!(again, cfg);
            assert_eq!(again.to_expanded_json(), expanded);
            assert_eq!(again.hash(), cfg.hash());
        }
    }

    #[test]
    fn workers_accepts_count_or_auto() {
        let text = MINIMAL.replacen('{', r#"{"workers": 3,"#, 1);
        assert_eq!(parse_config_str(&text).unwrap().workers, Workers::Count(3));
        let text = MINIMAL.replacen('{', r#"{"workers": "many","#, 1);
        assert!(matches!(parse_config_str(&text), Err(ConfigError::Parse(_))));
        assert_eq!("auto".parse::<Workers>(), Ok(Workers::Auto));
        assert!(Workers::Auto.resolve() >= 1);
    }

    #[test]
    fn bad_tables_and_slices_are_validation_errors() {
        let text = MINIMAL.replace(
            r#"{"kind": "point_mass"}"#,
            r#"{"kind": "double_track_variable_aero", "balance_table": [[0.0, 1.5], [0.1, 0.5]]}"#,
        );
        assert_eq!(parse_config_str(&text).unwrap_err().key(), Some("model.tables"));
        let text = MINIMAL.replacen('{', r#"{"output": {"svg_slices": [[31.0, 9.81]]},"#, 1);
        assert_eq!(parse_config_str(&text).unwrap_err().key(), Some("output.svg_slices"));
        let text = MINIMAL.replace(
            r#"{"kind": "point_mass"}"#,
            r#"{"kind": "double_track", "preset": "understeer", "params": null}"#,
        );
        assert!(parse_config_str(&text).is_ok());
    }

    #[test]
    fn hash_ignores_output_settings() {
        let a = parse_config_str(MINIMAL).unwrap();
        let text = MINIMAL.replacen('{', r#"{"output": {"dir": "elsewhere"}, "workers": 2,"#, 1);
        let b = parse_config_str(&text).unwrap();
        assert_eq!(a.hash(), b.hash());
        let text = MINIMAL.replace("[0.0, 5.0]", "[0.0, 6.0]");
        assert_ne!(a.hash(), parse_config_str(&text).unwrap().hash());
    }
}
