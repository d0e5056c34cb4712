//! JSON scenario files.
//!
//! A scenario file mirrors [`ScenarioConfig`] but lets most fields fall back
//! to defaults:
//!
//! ```json
//! {
//!   "name": "sc40-srp",
//!   "field": { "square": { "side": 100.0 } },
//!   "trajectory": {
//!     "path": { "circle": { "center": { "x": 50.0, "y": 50.0 }, "radius": 40.0 } },
//!     "sojourn_count": 360,
//!     "sensing_range_m": null,
//!     "r_max_m": 5.0
//!   },
//!   "protocol": "SRP",
//!   "net": { "n": 100, "m": 0.1, "alpha": 1.0, "e0": 0.5, "p_opt": 0.1 },
//!   "radio": { "e_elect": 5e-8, "e_da": 5e-9, "eps_fs": 1e-11, "eps_mp": 1.3e-15, "packet_bits": 4000 },
//!   "seed": 0,
//!   "max_rounds": 50000,
//!   "stop_rule": "max_rounds"
//! }
//! ```
//!
//! Omitted `net` and `radio` members fall back to their defaults field by
//! field. A missing or `null` `sensing_range_m` resolves to the coverage
//! radius of the path in the field. Default sojourn counts are 360 for
//! circles, 200 for squares and 1 for a static sink; `r_max_m` defaults to
//! 5 m.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::energy::RadioParams;
use crate::error::{Result, SimError};
use crate::geometry::{coverage_radius, Field, SinkPath, Trajectory};
use crate::protocols::{NetworkParams, ProtocolKind};
use crate::simulation::{ScenarioConfig, StopRule};

pub const DEFAULT_MAX_ROUNDS: u64 = 50_000;
pub const DEFAULT_R_MAX_M: f64 = 5.0;
pub const DEFAULT_CIRCLE_SOJOURNS: usize = 360;
pub const DEFAULT_SQUARE_SOJOURNS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub path: SinkPath,
    #[serde(default)]
    pub sojourn_count: Option<usize>,
    #[serde(default)]
    pub sensing_range_m: Option<f64>,
    #[serde(default)]
    pub r_max_m: Option<f64>,
}

/// On-disk scenario description; resolve it with [`ScenarioSpec::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub field: Field,
    pub trajectory: TrajectorySpec,
    pub protocol: ProtocolKind,
    #[serde(default)]
    pub net: NetworkParams,
    #[serde(default)]
    pub radio: RadioParams,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u64,
    #[serde(default)]
    pub stop_rule: StopRule,
}

fn default_max_rounds() -> u64 {
    DEFAULT_MAX_ROUNDS
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(serde_json::from_str(text)?)
    }

    /// Accepts a scenario object, or a run summary whose `config` member
    /// holds one.
    pub fn from_value(value: Value) -> Result<Self> {
        let value = match value {
            Value::Object(mut map) if map.contains_key("config") && !map.contains_key("field") => {
                let mut inner = map.remove("config").unwrap_or(Value::Null);
                if let (Value::Object(inner_map), Some(name)) = (&mut inner, map.remove("scenario")) {
                    if inner_map.get("name").is_none_or(Value::is_null) {
                        inner_map.insert("name".into(), name);
                    }
                }
                inner
            }
            other => other,
        };
        Ok(serde_json::from_value(value)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Applies `key=value` overrides; keys are dotted paths into the JSON
    /// form (`trajectory.sensing_range_m=51.35`, `net.n=50`). Values parse
    /// as JSON, falling back to a plain string.
    pub fn with_overrides<S: AsRef<str>>(&self, overrides: &[S]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut value = serde_json::to_value(self)?;
        for ov in overrides {
            let ov = ov.as_ref();
            let (key, raw) = ov
                .split_once('=')
                .ok_or_else(|| SimError::config(format!("override `{ov}` is not key=value")))?;
            let parsed: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
            set_path(&mut value, key, parsed)?;
        }
        Self::from_value(value)
    }

    pub fn resolve(&self) -> Result<ScenarioConfig> {
        self.field.validate()?;
        let t = &self.trajectory;
        let sojourn_count = t.sojourn_count.unwrap_or(match t.path {
            SinkPath::Circle { .. } => DEFAULT_CIRCLE_SOJOURNS,
            SinkPath::SquarePerimeter { .. } => DEFAULT_SQUARE_SOJOURNS,
            SinkPath::StaticPoint(_) => 1,
        });
        let sensing_range_m = match t.sensing_range_m {
            Some(r) => r,
            None => coverage_radius(&t.path, &self.field)?,
        };
        let trajectory = Trajectory::new(
            t.path,
            sojourn_count,
            sensing_range_m,
            t.r_max_m.unwrap_or(DEFAULT_R_MAX_M),
        )?;
        let cfg = ScenarioConfig {
            field: self.field,
            trajectory,
            protocol: self.protocol,
            net: self.net,
            radio: self.radio,
            seed: self.seed,
            max_rounds: self.max_rounds,
            stop_rule: self.stop_rule,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Spec with every default made explicit.
    pub fn from_config(name: Option<String>, cfg: &ScenarioConfig) -> Self {
        ScenarioSpec {
            name,
            field: cfg.field,
            trajectory: TrajectorySpec {
                path: cfg.trajectory.path,
                sojourn_count: Some(cfg.trajectory.sojourn_count),
                sensing_range_m: Some(cfg.trajectory.sensing_range_m),
                r_max_m: Some(cfg.trajectory.r_max_m),
            },
            protocol: cfg.protocol,
            net: cfg.net,
            radio: cfg.radio,
            seed: cfg.seed,
            max_rounds: cfg.max_rounds,
            stop_rule: cfg.stop_rule,
        }
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "custom".to_string())
    }
}

fn set_path(root: &mut Value, key: &str, new: Value) -> Result<()> {
    let mut cur = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        let Value::Object(map) = cur else {
            return Err(SimError::config(format!("override key `{key}`: `{part}` is not inside an object")));
        };
        if last {
            map.insert((*part).to_string(), new);
            return Ok(());
        }
        cur = map
            .entry((*part).to_string())
            .or_insert_with(|| Value::Object(Default::default()));
        if cur.is_null() {
            *cur = Value::Object(Default::default());
        }
    }
    Err(SimError::config("empty override key"))
}
