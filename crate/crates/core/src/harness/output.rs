//! Per-run CSV and JSON summary emitters.
//!
//! CSV files are UTF-8 with LF line endings; floats carry 17 significant
//! digits so they round-trip exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::geometry::coverage_radius;
use crate::harness::config::ScenarioSpec;
use crate::simulation::{RunMetrics, ScenarioConfig, RNG_IDENTITY};

pub const ROUNDS_HEADER: [&str; 4] = ["round", "alive", "residual_energy_j", "cumulative_packets"];

/// `{:.16e}`: 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_rounds_csv<W: Write>(metrics: &RunMetrics, w: W) -> Result<()> {
    let mut wtr = csv_writer(w);
    wtr.write_record(ROUNDS_HEADER)?;
    for r in &metrics.per_round {
        wtr.write_record([
            r.round.to_string(),
            r.alive.to_string(),
            format_float(r.residual.joules()),
            r.cumulative_packets.to_string(),
        ])?;
    }
    wtr.flush().map_err(|e| SimError::io("<csv>", e))?;
    Ok(())
}

pub fn rounds_csv_string(metrics: &RunMetrics) -> String {
    let mut buf = Vec::new();
    write_rounds_csv(metrics, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

/// JSON sidecar written next to every per-round CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummaryDoc {
    pub scenario: String,
    pub protocol: String,
    pub seed: u64,
    pub nodes: usize,
    pub rounds_executed: u64,
    pub first_death_round: Option<u64>,
    pub half_death_round: Option<u64>,
    pub last_death_round: Option<u64>,
    pub total_packets: u64,
    pub throughput_unit: String,
    pub packet_bits: u64,
    pub sensing_range_m: f64,
    pub coverage_radius_m: f64,
    pub initial_energy_j: f64,
    pub final_residual_energy_j: f64,
    pub rng: String,
    pub generator: String,
    pub config: ScenarioSpec,
}

impl RunSummaryDoc {
    pub fn new(name: &str, cfg: &ScenarioConfig, metrics: &RunMetrics) -> Result<Self> {
        let s = &metrics.summary;
        Ok(RunSummaryDoc {
            scenario: name.to_string(),
            protocol: serde_json::to_value(cfg.protocol)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
            seed: cfg.seed,
            nodes: s.nodes,
            rounds_executed: s.rounds_executed,
            first_death_round: s.first_death_round,
            half_death_round: s.half_death_round,
            last_death_round: s.last_death_round,
            total_packets: s.total_packets,
            throughput_unit: "packets".into(),
            packet_bits: cfg.radio.packet_bits,
            sensing_range_m: cfg.trajectory.sensing_range_m,
            coverage_radius_m: coverage_radius(&cfg.trajectory.path, &cfg.field)?,
            initial_energy_j: metrics.initial_energy.joules(),
            final_residual_energy_j: metrics
                .per_round
                .last()
                .map_or(metrics.initial_energy, |r| r.residual)
                .joules(),
            rng: RNG_IDENTITY.into(),
            generator: format!("srpsim {}", env!("CARGO_PKG_VERSION")),
            config: ScenarioSpec::from_config(Some(name.to_string()), cfg),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// `run.csv` -> `run.summary.json`.
pub fn summary_path(csv_path: &Path) -> PathBuf {
    sidecar(csv_path, "summary.json")
}

/// Replaces the extension of `path` with `suffix` (`out.csv` + `table.csv`
/// gives `out.table.csv`).
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

/// Writes `contents` to `path`, creating missing parent directories.
pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| SimError::io(parent, e))?;
    }
    let f = File::create(path).map_err(|e| SimError::io(path, e))?;
    let mut w = BufWriter::new(f);
    w.write_all(contents).map_err(|e| SimError::io(path, e))?;
    w.flush().map_err(|e| SimError::io(path, e))
}
