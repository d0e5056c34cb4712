//! Multi-seed replication, comparison reports and radius sweeps.
//!
//! Death rounds that were not reached within `max_rounds` are censored: they
//! sort above every observed round, and a quantile that depends on one is
//! reported as `null` (empty in CSV).

use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::coverage_radius;
use crate::harness::config::ScenarioSpec;
use crate::harness::output::{csv_writer, format_float};
use crate::simulation::{run, RunSummary, ScenarioConfig};

/// Resolves `spec` for one seed, overriding the round budget when given.
pub fn config_for_seed(spec: &ScenarioSpec, seed: u64, max_rounds: Option<u64>) -> Result<ScenarioConfig> {
    let mut cfg = spec.resolve()?;
    cfg.seed = seed;
    if let Some(r) = max_rounds {
        cfg.max_rounds = r;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs `spec` once per seed (in parallel); results keep seed order.
pub fn replicate(spec: &ScenarioSpec, seeds: &[u64], max_rounds: Option<u64>) -> Result<Vec<RunSummary>> {
    let configs = seeds
        .iter()
        .map(|&s| config_for_seed(spec, s, max_rounds))
        .collect::<Result<Vec<_>>>()?;
    configs
        .par_iter()
        .map(|cfg| run(cfg).map(|m| m.summary))
        .collect()
}

/// Median and quartiles (linear interpolation between order statistics).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub median: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
    pub iqr: Option<f64>,
}

fn quantile(sorted: &[f64], q: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let a = sorted[lo];
    let v = if frac == 0.0 {
        a
    } else {
        let b = sorted[lo + 1];
        if b.is_infinite() {
            f64::INFINITY
        } else {
            a + (b - a) * frac
        }
    };
    v.is_finite().then_some(v)
}

impl Quartiles {
    /// `None` entries are censored observations (larger than any value).
    pub fn from_censored(values: &[Option<u64>]) -> Self {
        let mut v: Vec<f64> = values
            .iter()
            .map(|x| x.map_or(f64::INFINITY, |r| r as f64))
            .collect();
        v.sort_by(f64::total_cmp);
        let q1 = quantile(&v, 0.25);
        let q3 = quantile(&v, 0.75);
        Quartiles {
            median: quantile(&v, 0.5),
            q1,
            q3,
            iqr: q1.zip(q3).map(|(a, b)| b - a),
        }
    }
}

/// Compares medians with undefined (censored) treated as +infinity.
pub fn compare_medians(a: Option<f64>, b: Option<f64>) -> Ordering {
    let a = a.unwrap_or(f64::INFINITY);
    let b = b.unwrap_or(f64::INFINITY);
    a.total_cmp(&b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub first_death: Option<u64>,
    pub half_death: Option<u64>,
    pub last_death: Option<u64>,
    pub total_packets: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioStats {
    pub scenario: String,
    pub sensing_range_m: f64,
    pub coverage_radius_m: f64,
    pub runs: Vec<SeedRun>,
    pub first_death: Quartiles,
    pub half_death: Quartiles,
    pub last_death: Quartiles,
    pub total_packets: Quartiles,
}

impl ScenarioStats {
    pub fn metric(&self, m: Metric) -> &Quartiles {
        match m {
            Metric::FirstDeath => &self.first_death,
            Metric::HalfDeath => &self.half_death,
            Metric::LastDeath => &self.last_death,
            Metric::TotalPackets => &self.total_packets,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    FirstDeath,
    HalfDeath,
    LastDeath,
    TotalPackets,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::FirstDeath, Metric::HalfDeath, Metric::LastDeath, Metric::TotalPackets];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Greater,
    Equal,
    Less,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingVerdict {
    pub a: String,
    pub b: String,
    pub metric: Metric,
    /// How `a`'s median compares with `b`'s.
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub seeds: Vec<u64>,
    pub max_rounds: Option<u64>,
    pub throughput_unit: String,
    pub scenarios: Vec<ScenarioStats>,
    pub orderings: Vec<OrderingVerdict>,
}

impl ComparisonReport {
    pub fn stats(&self, scenario: &str) -> Option<&ScenarioStats> {
        self.scenarios.iter().find(|s| s.scenario == scenario)
    }

    pub fn verdict(&self, a: &str, b: &str, metric: Metric) -> Option<Verdict> {
        let (sa, sb) = (self.stats(a)?, self.stats(b)?);
        Some(verdict_of(sa.metric(metric).median, sb.metric(metric).median))
    }
}

fn verdict_of(a: Option<f64>, b: Option<f64>) -> Verdict {
    match compare_medians(a, b) {
        Ordering::Greater => Verdict::Greater,
        Ordering::Equal => Verdict::Equal,
        Ordering::Less => Verdict::Less,
    }
}

fn stats_from_runs(name: &str, cfg: &ScenarioConfig, seeds: &[u64], summaries: &[RunSummary]) -> Result<ScenarioStats> {
    let runs: Vec<SeedRun> = seeds
        .iter()
        .zip(summaries)
        .map(|(&seed, s)| SeedRun {
            seed,
            first_death: s.first_death_round,
            half_death: s.half_death_round,
            last_death: s.last_death_round,
            total_packets: s.total_packets,
        })
        .collect();
    let col = |f: fn(&SeedRun) -> Option<u64>| Quartiles::from_censored(&runs.iter().map(f).collect::<Vec<_>>());
    Ok(ScenarioStats {
        scenario: name.to_string(),
        sensing_range_m: cfg.trajectory.sensing_range_m,
        coverage_radius_m: coverage_radius(&cfg.trajectory.path, &cfg.field)?,
        first_death: col(|r| r.first_death),
        half_death: col(|r| r.half_death),
        last_death: col(|r| r.last_death),
        total_packets: col(|r| Some(r.total_packets)),
        runs,
    })
}

/// Runs every scenario on the same seed set. Scenarios and seeds run in
/// parallel; the report is ordered as given.
pub fn compare(specs: &[ScenarioSpec], seeds: &[u64], max_rounds: Option<u64>) -> Result<ComparisonReport> {
    let scenarios = specs
        .par_iter()
        .map(|spec| {
            let cfg = config_for_seed(spec, seeds.first().copied().unwrap_or(0), max_rounds)?;
            let summaries = replicate(spec, seeds, max_rounds)?;
            stats_from_runs(&spec.display_name(), &cfg, seeds, &summaries)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut orderings = Vec::new();
    for (i, a) in scenarios.iter().enumerate() {
        for b in scenarios.iter().skip(i + 1) {
            for metric in Metric::ALL {
                orderings.push(OrderingVerdict {
                    a: a.scenario.clone(),
                    b: b.scenario.clone(),
                    metric,
                    verdict: verdict_of(a.metric(metric).median, b.metric(metric).median),
                });
            }
        }
    }
    Ok(ComparisonReport {
        seeds: seeds.to_vec(),
        max_rounds,
        throughput_unit: "packets".into(),
        scenarios,
        orderings,
    })
}

pub const RUNS_HEADER: [&str; 6] = ["scenario", "seed", "first_death", "half_death", "last_death", "total_packets"];

pub const TABLE_HEADER: [&str; 13] = [
    "scenario",
    "sensing_range_m",
    "first_death_median",
    "first_death_q1",
    "first_death_q3",
    "half_death_median",
    "half_death_q1",
    "half_death_q3",
    "last_death_median",
    "last_death_q1",
    "last_death_q3",
    "total_packets_median",
    "total_packets_iqr",
];

fn opt_int(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

/// Long format: one row per (scenario, seed).
pub fn write_runs_csv<W: Write>(report: &ComparisonReport, w: W) -> Result<()> {
    let mut wtr = csv_writer(w);
    wtr.write_record(RUNS_HEADER)?;
    for s in &report.scenarios {
        for r in &s.runs {
            wtr.write_record([
                s.scenario.clone(),
                r.seed.to_string(),
                opt_int(r.first_death),
                opt_int(r.half_death),
                opt_int(r.last_death),
                r.total_packets.to_string(),
            ])?;
        }
    }
    wtr.flush().map_err(|e| crate::error::SimError::io("<csv>", e))?;
    Ok(())
}

/// One row of medians and quartiles per scenario.
pub fn write_table_csv<W: Write>(report: &ComparisonReport, w: W) -> Result<()> {
    let mut wtr = csv_writer(w);
    wtr.write_record(TABLE_HEADER)?;
    for s in &report.scenarios {
        let mut row = vec![s.scenario.clone(), format_float(s.sensing_range_m)];
        for q in [&s.first_death, &s.half_death, &s.last_death] {
            row.extend([opt_float(q.median), opt_float(q.q1), opt_float(q.q3)]);
        }
        row.extend([opt_float(s.total_packets.median), opt_float(s.total_packets.iqr)]);
        wtr.write_record(row)?;
    }
    wtr.flush().map_err(|e| crate::error::SimError::io("<csv>", e))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub radius_m: f64,
    pub valid: bool,
    pub coverage_radius_m: Option<f64>,
    pub sensing_range_m: Option<f64>,
    pub first_death_median: Option<f64>,
    pub half_death_median: Option<f64>,
    pub last_death_median: Option<f64>,
    pub total_packets_median: Option<f64>,
    pub note: String,
}

pub const SWEEP_HEADER: [&str; 9] = [
    "radius_m",
    "valid",
    "coverage_radius_m",
    "sensing_range_m",
    "first_death_median",
    "half_death_median",
    "last_death_median",
    "total_packets_median",
    "note",
];

/// Replays `base` with each circular trajectory radius. Radii that do not
/// fit in the field give an invalid row instead of an error.
pub fn sweep_radius(base: &ScenarioSpec, radii: &[f64], seeds: &[u64], max_rounds: Option<u64>) -> Result<Vec<SweepRow>> {
    use crate::geometry::SinkPath;
    if !matches!(base.trajectory.path, SinkPath::Circle { .. }) {
        return Err(crate::error::SimError::config("radius sweep needs a circular trajectory"));
    }
    radii
        .iter()
        .map(|&radius| {
            let mut spec = base.clone();
            if let SinkPath::Circle { center, .. } = spec.trajectory.path {
                spec.trajectory.path = SinkPath::Circle { center, radius };
            }
            let invalid = |note: String| SweepRow {
                radius_m: radius,
                valid: false,
                coverage_radius_m: None,
                sensing_range_m: None,
                first_death_median: None,
                half_death_median: None,
                last_death_median: None,
                total_packets_median: None,
                note,
            };
            let cfg = match config_for_seed(&spec, seeds.first().copied().unwrap_or(0), max_rounds) {
                Ok(cfg) => cfg,
                Err(e) => return Ok(invalid(e.to_string())),
            };
            let summaries = replicate(&spec, seeds, max_rounds)?;
            let stats = stats_from_runs(&spec.display_name(), &cfg, seeds, &summaries)?;
            Ok(SweepRow {
                radius_m: radius,
                valid: true,
                coverage_radius_m: Some(stats.coverage_radius_m),
                sensing_range_m: Some(stats.sensing_range_m),
                first_death_median: stats.first_death.median,
                half_death_median: stats.half_death.median,
                last_death_median: stats.last_death.median,
                total_packets_median: stats.total_packets.median,
                note: String::new(),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut wtr = csv_writer(w);
    wtr.write_record(SWEEP_HEADER)?;
    for r in rows {
        wtr.write_record([
            format_float(r.radius_m),
            r.valid.to_string(),
            opt_float(r.coverage_radius_m),
            opt_float(r.sensing_range_m),
            opt_float(r.first_death_median),
            opt_float(r.half_death_median),
            opt_float(r.last_death_median),
            opt_float(r.total_packets_median),
            r.note.clone(),
        ])?;
    }
    wtr.flush().map_err(|e| crate::error::SimError::io("<csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles_of_plain_values() {
        let q = Quartiles::from_censored(&[Some(1), Some(2), Some(3), Some(4), Some(5)]);
        assert_eq!(q.median, Some(3.0));
        assert_eq!(q.q1, Some(2.0));
        assert_eq!(q.q3, Some(4.0));
        assert_eq!(q.iqr, Some(2.0));
        let q = Quartiles::from_censored(&[Some(10), Some(20)]);
        assert_eq!(q.median, Some(15.0));
    }

    #[test]
    fn single_seed_has_zero_width_iqr() {
        let q = Quartiles::from_censored(&[Some(42)]);
        assert_eq!(q.median, Some(42.0));
        assert_eq!(q.iqr, Some(0.0));
    }

    #[test]
    fn censored_values_push_quantiles_to_undefined() {
        let q = Quartiles::from_censored(&[Some(1), None, None, Some(2)]);
        assert_eq!(q.q1, Some(1.75));
        assert_eq!(q.median, None);
        assert_eq!(q.iqr, None);
        assert_eq!(compare_medians(None, Some(1e9)), Ordering::Greater);
        assert_eq!(compare_medians(None, None), Ordering::Equal);
    }
}
