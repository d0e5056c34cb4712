use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SimError};
use crate::harness::config::ScenarioSpec;

/// Built-in scenarios with the default (Table-style) network and radio
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Sep,
    ClSep,
    SsSrp,
    Sc10Srp,
    Sc20Srp,
    Sc40Srp,
    CcSrp,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::Sep,
        Preset::ClSep,
        Preset::SsSrp,
        Preset::Sc10Srp,
        Preset::Sc20Srp,
        Preset::Sc40Srp,
        Preset::CcSrp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Sep => "sep",
            Preset::ClSep => "cl-sep",
            Preset::SsSrp => "ss-srp",
            Preset::Sc10Srp => "sc10-srp",
            Preset::Sc20Srp => "sc20-srp",
            Preset::Sc40Srp => "sc40-srp",
            Preset::CcSrp => "cc-srp",
        }
    }

    pub fn json(self) -> &'static str {
        match self {
            Preset::Sep => include_str!("../../presets/sep.json"),
            Preset::ClSep => include_str!("../../presets/cl-sep.json"),
            Preset::SsSrp => include_str!("../../presets/ss-srp.json"),
            Preset::Sc10Srp => include_str!("../../presets/sc10-srp.json"),
            Preset::Sc20Srp => include_str!("../../presets/sc20-srp.json"),
            Preset::Sc40Srp => include_str!("../../presets/sc40-srp.json"),
            Preset::CcSrp => include_str!("../../presets/cc-srp.json"),
        }
    }

    pub fn spec(self) -> ScenarioSpec {
        ScenarioSpec::from_json(self.json()).expect("bundled preset parses")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = SimError;

    /// Case-insensitive; `_` and `-` are interchangeable (`SC40_SRP`, `sc40-srp`).
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| SimError::UnknownScenario(s.to_string()))
    }
}
