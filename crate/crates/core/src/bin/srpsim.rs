use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use srpsim::harness::output::{self, summary_path, write_file, RunSummaryDoc};
use srpsim::harness::report::{self, ComparisonReport};
use srpsim::harness::validate::validate_path;
use srpsim::harness::{Preset, ScenarioSpec};
use srpsim::SimError;

/// Mobile-sink wireless sensor network simulator.
#[derive(Parser)]
#[command(name = "srpsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its per-round CSV and summary JSON.
    Simulate(SimulateArgs),
    /// Run several scenarios over a seed set and report medians and orderings.
    Compare(CompareArgs),
    /// Re-run a circular-trajectory scenario over a list of radii.
    Sweep(SweepArgs),
    /// Check emitted CSV/JSON files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// List built-in scenarios, or print one as JSON.
    Presets {
        name: Option<String>,
    },
}

#[derive(Args)]
struct Source {
    /// Built-in scenario (sep, cl-sep, ss-srp, sc10-srp, sc20-srp, sc40-srp, cc-srp).
    #[arg(long, conflicts_with = "config")]
    scenario: Option<String>,
    /// Scenario JSON file (or a run summary to replay).
    #[arg(long)]
    config: Option<PathBuf>,
    /// key=value override applied to the scenario JSON, repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl Source {
    fn spec(&self) -> Result<ScenarioSpec, SimError> {
        let base = match (&self.scenario, &self.config) {
            (Some(name), _) => name.parse::<Preset>()?.spec(),
            (None, Some(path)) => ScenarioSpec::load(path)?,
            (None, None) => return Err(SimError::InvalidConfig("pass --scenario or --config".into())),
        };
        base.with_overrides(&self.overrides)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: Source,
    /// Seed (defaults to the one in the scenario).
    #[arg(long)]
    seed: Option<u64>,
    /// Round budget (defaults to the one in the scenario).
    #[arg(long)]
    rounds: Option<u64>,
    /// Per-round CSV path; the summary goes to `<stem>.summary.json`.
    /// Without it the summary is printed to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Comma-separated built-in scenarios.
    #[arg(long, value_delimiter = ',')]
    scenarios: Vec<String>,
    /// Additional scenario JSON files.
    #[arg(long = "config")]
    configs: Vec<PathBuf>,
    /// Override applied to every scenario, repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Number of seeds; runs seeds 0..N-1.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long)]
    rounds: Option<u64>,
    /// Long-format CSV path; also writes `<stem>.report.json` and `<stem>.table.csv`.
    #[arg(long)]
    out: PathBuf,
    /// Also write one per-round CSV per scenario (first seed) into this directory.
    #[arg(long)]
    per_round_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    /// Trajectory radii in meters, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long)]
    rounds: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

fn exit_code(err: &SimError) -> u8 {
    match err {
        SimError::Io { .. } | SimError::Csv(_) => 3,
        _ => 2,
    }
}

fn simulate(args: &SimulateArgs) -> Result<(), SimError> {
    let spec = args.source.spec()?;
    let mut cfg = spec.resolve()?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(rounds) = args.rounds {
        cfg.max_rounds = rounds;
    }
    let metrics = srpsim::run(&cfg)?;
    let doc = RunSummaryDoc::new(&spec.display_name(), &cfg, &metrics)?;
    match &args.out {
        Some(path) => {
            write_file(path, output::rounds_csv_string(&metrics).as_bytes())?;
            write_file(&summary_path(path), doc.to_json()?.as_bytes())?;
        }
        None => print!("{}", doc.to_json()?),
    }
    Ok(())
}

fn write_report(report: &ComparisonReport, out: &Path) -> Result<(), SimError> {
    let mut runs = Vec::new();
    report::write_runs_csv(report, &mut runs)?;
    write_file(out, &runs)?;
    let mut table = Vec::new();
    report::write_table_csv(report, &mut table)?;
    write_file(&output::sidecar(out, "table.csv"), &table)?;
    let json = serde_json::to_string_pretty(report)? + "\n";
    write_file(&output::sidecar(out, "report.json"), json.as_bytes())
}

fn compare(args: &CompareArgs) -> Result<(), SimError> {
    let mut specs = Vec::new();
    for name in &args.scenarios {
        specs.push(name.parse::<Preset>()?.spec().with_overrides(&args.overrides)?);
    }
    for path in &args.configs {
        specs.push(ScenarioSpec::load(path)?.with_overrides(&args.overrides)?);
    }
    if specs.len() < 2 {
        return Err(SimError::InvalidConfig("compare needs at least two scenarios".into()));
    }
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let report = report::compare(&specs, &seeds, args.rounds)?;
    write_report(&report, &args.out)?;

    if let Some(dir) = &args.per_round_dir {
        std::fs::create_dir_all(dir).map_err(|e| SimError::Io {
            path: dir.display().to_string(),
            source: e,
        })?;
        for spec in &specs {
            let cfg = report::config_for_seed(spec, seeds.first().copied().unwrap_or(0), args.rounds)?;
            let metrics = srpsim::run(&cfg)?;
            let path = dir.join(format!("{}.csv", spec.display_name()));
            write_file(&path, output::rounds_csv_string(&metrics).as_bytes())?;
            let doc = RunSummaryDoc::new(&spec.display_name(), &cfg, &metrics)?;
            write_file(&summary_path(&path), doc.to_json()?.as_bytes())?;
        }
    }

    for s in &report.scenarios {
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.0}"));
        println!(
            "{:<24} first {:>8}  half {:>8}  last {:>8}  packets {:>10}",
            s.scenario,
            fmt(s.first_death.median),
            fmt(s.half_death.median),
            fmt(s.last_death.median),
            fmt(s.total_packets.median)
        );
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<(), SimError> {
    let spec = args.source.spec()?;
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let rows = report::sweep_radius(&spec, &args.values, &seeds, args.rounds)?;
    let mut buf = Vec::new();
    report::write_sweep_csv(&rows, &mut buf)?;
    write_file(&args.out, &buf)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Compare(a) => compare(a),
        Command::Sweep(a) => sweep(a),
        Command::Presets { name: None } => {
            for p in Preset::ALL {
                println!("{p}");
            }
            Ok(())
        }
        Command::Presets { name: Some(name) } => name.parse::<Preset>().map(|p| print!("{}", p.json())),
        Command::Validate { files } => {
            let mut failed = false;
            for f in files {
                match validate_path(f) {
                    Ok(v) if v.ok() => println!("{}: ok ({} rows)", f.display(), v.rows),
                    Ok(v) => {
                        failed = true;
                        println!("{}: FAILED", f.display());
                        for p in v.problems.iter().take(20) {
                            println!("  {p}");
                        }
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(exit_code(&e));
                    }
                }
            }
            return if failed { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
