//! Python bindings. Structured values cross the boundary as JSON-compatible
//! dicts and lists (converted with the standard `json` module).

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};

use srpsim::harness::output::{rounds_csv_string, RunSummaryDoc};
use srpsim::harness::report;
use srpsim::harness::{Preset, ScenarioSpec};
use srpsim::{Field, NetworkParams, NodeKind, Point, RadioParams, ScenarioConfig, SimError, SinkPath};

fn err(e: SimError) -> PyErr {
    match e {
        SimError::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `str` is taken as JSON text; anything else goes through `json.dumps`.
fn json_text(obj: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(s) = obj.cast::<PyString>() {
        return Ok(s.to_string());
    }
    obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()
}

fn from_py<T: serde::de::DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    serde_json::from_str(&json_text(obj)?).map_err(json_err)
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn kind(name: &str) -> PyResult<NodeKind> {
    match name {
        "normal" => Ok(NodeKind::Normal),
        "advanced" => Ok(NodeKind::Advanced),
        _ => Err(PyValueError::new_err(format!("node kind must be 'normal' or 'advanced', got {name:?}"))),
    }
}

fn radio(bits: Option<u64>) -> RadioParams {
    let r = RadioParams::default();
    RadioParams { packet_bits: bits.unwrap_or(r.packet_bits), ..r }
}

#[pyfunction]
fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    srpsim::distance(Point::new(a.0, a.1), Point::new(b.0, b.1))
}

/// Coverage radius of a sink path (dict or JSON) within a field.
#[pyfunction]
fn coverage_radius(path: &Bound<'_, PyAny>, field: &Bound<'_, PyAny>) -> PyResult<f64> {
    let path: SinkPath = from_py(path)?;
    let field: Field = from_py(field)?;
    srpsim::coverage_radius(&path, &field).map_err(err)
}

/// Transmit energy in joules with the default radio.
#[pyfunction]
#[pyo3(signature = (d, bits=None))]
fn tx_energy(d: f64, bits: Option<u64>) -> PyResult<f64> {
    let r = radio(bits);
    srpsim::tx_energy(&r, r.packet_bits, d).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (bits=None))]
fn rx_energy(bits: Option<u64>) -> f64 {
    let r = radio(bits);
    srpsim::rx_energy(&r, r.packet_bits)
}

#[pyfunction]
#[pyo3(signature = (messages, bits=None))]
fn aggregation_energy(messages: u64, bits: Option<u64>) -> f64 {
    let r = radio(bits);
    srpsim::aggregation_energy(&r, r.packet_bits, messages)
}

#[pyfunction]
#[pyo3(signature = (kind_name, m=0.1, alpha=1.0, p_opt=0.1))]
fn ch_probability(kind_name: &str, m: f64, alpha: f64, p_opt: f64) -> PyResult<f64> {
    let net = NetworkParams { m, alpha, p_opt, ..NetworkParams::default() };
    net.validate().map_err(err)?;
    Ok(srpsim::ch_probability(&net, kind(kind_name)?))
}

#[pyfunction]
fn election_threshold(p: f64, round: u64, in_set_g: bool) -> f64 {
    srpsim::election_threshold(p, round, in_set_g)
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    Preset::ALL.iter().map(|p| p.name()).collect()
}

/// A scenario description (preset or JSON) that can be tweaked and run.
#[pyclass(module = "srpsim", frozen)]
struct Scenario {
    spec: ScenarioSpec,
}

impl Scenario {
    fn config(&self, seed: Option<u64>, rounds: Option<u64>) -> PyResult<ScenarioConfig> {
        let mut cfg = self.spec.resolve().map_err(err)?;
        if let Some(s) = seed {
            cfg.seed = s;
        }
        if let Some(r) = rounds {
            cfg.max_rounds = r;
        }
        cfg.validate().map_err(err)?;
        Ok(cfg)
    }
}

#[pymethods]
impl Scenario {
    /// Accepts a dict, a JSON string, or a run summary to replay.
    #[new]
    fn new(obj: &Bound<'_, PyAny>) -> PyResult<Self> {
        let spec = ScenarioSpec::from_json(&json_text(obj)?).map_err(err)?;
        Ok(Scenario { spec })
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        let p: Preset = name.parse().map_err(err)?;
        Ok(Scenario { spec: p.spec() })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Scenario { spec: ScenarioSpec::load(path).map_err(err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.spec.display_name()
    }

    /// Returns a copy with `key=value` overrides applied.
    fn with_overrides(&self, overrides: Vec<String>) -> PyResult<Self> {
        Ok(Scenario { spec: self.spec.with_overrides(&overrides).map_err(err)? })
    }

    /// Fully resolved configuration (every default explicit).
    fn resolved<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let cfg = self.config(None, None)?;
        to_py(py, &ScenarioSpec::from_config(self.spec.name.clone(), &cfg))
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.spec)
    }

    #[getter]
    fn sensing_range_m(&self) -> PyResult<f64> {
        Ok(self.config(None, None)?.trajectory.sensing_range_m)
    }

    #[getter]
    fn coverage_radius_m(&self) -> PyResult<f64> {
        srpsim::coverage_radius(&self.spec.trajectory.path, &self.spec.field).map_err(err)
    }

    #[pyo3(signature = (seed=None, rounds=None))]
    fn run(&self, py: Python<'_>, seed: Option<u64>, rounds: Option<u64>) -> PyResult<RunMetrics> {
        let cfg = self.config(seed, rounds)?;
        let metrics = py.detach(|| srpsim::run(&cfg)).map_err(err)?;
        Ok(RunMetrics { name: self.spec.display_name(), cfg, metrics })
    }

    /// Step-by-step simulation handle.
    #[pyo3(signature = (seed=None))]
    fn simulation(&self, seed: Option<u64>) -> PyResult<Simulation> {
        let cfg = self.config(seed, None)?;
        Ok(Simulation { inner: srpsim::Simulation::new(cfg).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Scenario({:?})", self.spec.display_name())
    }
}

/// Result of a complete run.
#[pyclass(module = "srpsim", frozen)]
struct RunMetrics {
    name: String,
    cfg: ScenarioConfig,
    metrics: srpsim::RunMetrics,
}

#[pymethods]
impl RunMetrics {
    /// Summary document, the same one the CLI writes next to its CSV.
    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let doc = RunSummaryDoc::new(&self.name, &self.cfg, &self.metrics).map_err(err)?;
        to_py(py, &doc)
    }

    #[getter]
    fn first_death_round(&self) -> Option<u64> {
        self.metrics.summary.first_death_round
    }

    #[getter]
    fn half_death_round(&self) -> Option<u64> {
        self.metrics.summary.half_death_round
    }

    #[getter]
    fn last_death_round(&self) -> Option<u64> {
        self.metrics.summary.last_death_round
    }

    #[getter]
    fn total_packets(&self) -> u64 {
        self.metrics.summary.total_packets
    }

    #[getter]
    fn initial_energy_j(&self) -> f64 {
        self.metrics.initial_energy.joules()
    }

    #[getter]
    fn rounds(&self) -> Vec<u64> {
        self.metrics.per_round.iter().map(|r| r.round).collect()
    }

    #[getter]
    fn alive(&self) -> Vec<usize> {
        self.metrics.per_round.iter().map(|r| r.alive).collect()
    }

    #[getter]
    fn residual_energy_j(&self) -> Vec<f64> {
        self.metrics.per_round.iter().map(|r| r.residual.joules()).collect()
    }

    #[getter]
    fn round_cost_j(&self) -> Vec<f64> {
        self.metrics.per_round.iter().map(|r| r.round_cost.joules()).collect()
    }

    #[getter]
    fn cumulative_packets(&self) -> Vec<u64> {
        self.metrics.per_round.iter().map(|r| r.cumulative_packets).collect()
    }

    #[getter]
    fn node_death_rounds(&self) -> Vec<Option<u64>> {
        self.metrics.node_death_rounds.clone()
    }

    /// Per-round CSV, byte-identical to `srpsim simulate --out`.
    fn to_csv(&self) -> String {
        rounds_csv_string(&self.metrics)
    }

    fn __len__(&self) -> usize {
        self.metrics.per_round.len()
    }

    fn __repr__(&self) -> String {
        let s = &self.metrics.summary;
        format!(
            "RunMetrics({:?}, rounds={}, first_death={:?}, last_death={:?}, packets={})",
            self.name, s.rounds_executed, s.first_death_round, s.last_death_round, s.total_packets
        )
    }
}

/// Round-by-round driver.
#[pyclass(module = "srpsim", unsendable)]
struct Simulation {
    inner: srpsim::Simulation,
}

#[pymethods]
impl Simulation {
    /// Executes one round and returns what happened in it.
    fn step<'py>(&mut self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let round = self.inner.next_round();
        let out = self.inner.step();
        let d = PyDict::new(py);
        d.set_item("round", round)?;
        d.set_item("cost_j", out.cost.joules())?;
        d.set_item("delivered", out.delivered)?;
        d.set_item("deaths", PyList::new(py, &out.deaths)?)?;
        d.set_item("cluster_heads", PyList::new(py, &out.cluster_heads)?)?;
        Ok(d)
    }

    #[getter]
    fn next_round(&self) -> u64 {
        self.inner.next_round()
    }

    #[getter]
    fn alive_count(&self) -> usize {
        self.inner.alive_count()
    }

    #[getter]
    fn residual_energy_j(&self) -> f64 {
        self.inner.residual().joules()
    }

    fn nodes<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let list = PyList::empty(py);
        for n in self.inner.nodes() {
            let d = PyDict::new(py);
            d.set_item("id", n.id)?;
            d.set_item("x", n.pos.x)?;
            d.set_item("y", n.pos.y)?;
            d.set_item("kind", if n.kind == NodeKind::Advanced { "advanced" } else { "normal" })?;
            d.set_item("energy_j", n.energy_j())?;
            d.set_item("alive", n.alive)?;
            d.set_item("packets_sent", n.packets_sent)?;
            d.set_item("death_round", n.death_round)?;
            list.append(d)?;
        }
        Ok(list)
    }
}

/// Runs every scenario over seeds `0..seeds` and returns the comparison report.
#[pyfunction]
#[pyo3(signature = (scenarios, seeds=10, rounds=None))]
fn compare<'py>(
    py: Python<'py>,
    scenarios: Vec<Bound<'py, PyAny>>,
    seeds: u64,
    rounds: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut specs = Vec::new();
    for s in &scenarios {
        if let Ok(sc) = s.cast::<Scenario>() {
            specs.push(sc.get().spec.clone());
        } else {
            let name: String = s.extract()?;
            specs.push(name.parse::<Preset>().map_err(err)?.spec());
        }
    }
    let seeds: Vec<u64> = (0..seeds).collect();
    let report = py.detach(|| report::compare(&specs, &seeds, rounds)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
#[pyo3(name = "srpsim")]
fn srpsim_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_radius, m)?)?;
    m.add_function(wrap_pyfunction!(tx_energy, m)?)?;
    m.add_function(wrap_pyfunction!(rx_energy, m)?)?;
    m.add_function(wrap_pyfunction!(aggregation_energy, m)?)?;
    m.add_function(wrap_pyfunction!(ch_probability, m)?)?;
    m.add_function(wrap_pyfunction!(election_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_class::<Scenario>()?;
    m.add_class::<RunMetrics>()?;
    m.add_class::<Simulation>()?;
    Ok(())
}
