//! Round-based simulator for delay-tolerant wireless sensor networks with
//! static and mobile sinks.
//!
//! The crate is split along the simulation pipeline:
//!
//! * [`geometry`]: fields, sink tours and coverage radius.
//! * [`energy`]: first-order radio model and exact battery bookkeeping.
//! * [`protocols`]: SEP, CL-SEP and SRP per-round engines.
//! * [`simulation`]: deployment, seeded streams and the round loop.
//! * [`harness`]: presets, config files, replication and CSV/JSON output.

pub mod energy;
pub mod error;
pub mod geometry;
pub mod protocols;
pub mod harness;
pub mod simulation;

pub use energy::{aggregation_energy, rx_energy, tx_energy, Energy, RadioParams};
pub use error::{Result, SimError};
pub use geometry::{coverage_radius, distance, sink_position, sojourn_points, Field, Point, SinkPath, Trajectory};
pub use protocols::{ch_probability, election_threshold, NetworkParams, Node, NodeKind, ProtocolKind, RoundOutcome};
pub use simulation::{
    deploy, rng_stream, run, run_with_nodes, RoundRecord, RunMetrics, RunSummary, ScenarioConfig, Simulation, StopRule,
};
