//! Deployment, seeded randomness and the round loop.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{CostTable, Energy, RadioParams};
use crate::error::{Result, SimError};
use crate::geometry::{Field, Point, SinkPath, Trajectory};
use crate::protocols::{
    ClSep, NetworkParams, Node, NodeKind, ProtocolEngine, ProtocolKind, RoundOutcome, Sep, Srp,
};

/// Identity of the random generator, echoed into every summary so golden
/// outputs can be tied to it.
pub const RNG_IDENTITY: &str = "rand_chacha 0.9 ChaCha20Rng; seed_from_u64(seed); stream = fnv1a64(label)";

pub const DEPLOY_STREAM: &str = "deploy";
pub const ELECTION_STREAM: &str = "election";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    AllDead,
    #[default]
    MaxRounds,
}

/// Fully resolved scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub field: Field,
    pub trajectory: Trajectory,
    pub protocol: ProtocolKind,
    pub net: NetworkParams,
    pub radio: RadioParams,
    pub seed: u64,
    pub max_rounds: u64,
    pub stop_rule: StopRule,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        self.trajectory.validate()?;
        self.net.validate()?;
        self.radio.validate()?;
        if !self.trajectory.contained_in(&self.field) {
            return Err(SimError::config("trajectory leaves the field"));
        }
        let mobile = !self.trajectory.path.is_static();
        if self.protocol.wants_mobile_sink() != mobile {
            return Err(SimError::config(format!(
                "protocol {:?} is incompatible with sink path {:?}",
                self.protocol, self.trajectory.path
            )));
        }
        if self.max_rounds == 0 {
            return Err(SimError::config("max_rounds must be at least 1"));
        }
        Ok(())
    }

    /// Static sink location for SEP / CL-SEP.
    fn static_sink(&self) -> Point {
        match self.trajectory.path {
            SinkPath::StaticPoint(p) => p,
            _ => self.field.center(),
        }
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Independent reproducible stream for `(seed, label)`.
pub fn rng_stream(seed: u64, label: &str) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a64(label.as_bytes()));
    rng
}

/// Uniform random deployment; the first `round(m*n)` ids of a shuffled order
/// become advanced nodes.
pub fn deploy(cfg: &ScenarioConfig) -> Vec<Node> {
    let mut rng = rng_stream(cfg.seed, DEPLOY_STREAM);
    let (lo, hi) = cfg.field.bounding_box();
    let positions: Vec<Point> = (0..cfg.net.n)
        .map(|_| loop {
            let x = lo.x + rng.random::<f64>() * (hi.x - lo.x);
            let y = lo.y + rng.random::<f64>() * (hi.y - lo.y);
            let p = Point::new(x, y);
            if cfg.field.contains(p) {
                break p;
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..cfg.net.n).collect();
    order.shuffle(&mut rng);
    let mut kinds = vec![NodeKind::Normal; cfg.net.n];
    for &id in order.iter().take(cfg.net.advanced_count()) {
        kinds[id] = NodeKind::Advanced;
    }
    positions
        .into_iter()
        .zip(kinds)
        .enumerate()
        .map(|(id, (pos, kind))| Node::new(id, pos, kind, cfg.net.initial_energy(kind)))
        .collect()
}

/// Network state after one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub alive: usize,
    /// Sum of all batteries, including energy stranded in dead nodes.
    pub residual: Energy,
    pub cumulative_packets: u64,
    /// Energy drawn during this round.
    pub round_cost: Energy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub nodes: usize,
    pub rounds_executed: u64,
    /// Stability period: round of the first death.
    pub first_death_round: Option<u64>,
    /// Round at which half of the nodes are dead.
    pub half_death_round: Option<u64>,
    /// Network lifetime: round at which the last node died.
    pub last_death_round: Option<u64>,
    pub total_packets: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub initial_energy: Energy,
    pub per_round: Vec<RoundRecord>,
    pub summary: RunSummary,
    pub node_death_rounds: Vec<Option<u64>>,
}

fn engine_for(cfg: &ScenarioConfig) -> Box<dyn ProtocolEngine + Send> {
    let costs = CostTable::new(cfg.radio);
    match cfg.protocol {
        ProtocolKind::Sep => Box::new(Sep::new(
            &cfg.net,
            cfg.static_sink(),
            costs,
            rng_stream(cfg.seed, ELECTION_STREAM),
        )),
        ProtocolKind::ClSep => Box::new(ClSep::new(cfg.static_sink(), costs)),
        ProtocolKind::Srp => Box::new(Srp::new(&cfg.trajectory, costs)),
    }
}

/// A scenario in progress: owns the nodes and the protocol engine.
pub struct Simulation {
    cfg: ScenarioConfig,
    nodes: Vec<Node>,
    engine: Box<dyn ProtocolEngine + Send>,
    next_round: u64,
}

impl Simulation {
    /// Deploys nodes from the scenario seed.
    pub fn new(cfg: ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let nodes = deploy(&cfg);
        Self::with_nodes(cfg, nodes)
    }

    /// Uses a caller-supplied deployment; `cfg.net.n` is ignored.
    pub fn with_nodes(cfg: ScenarioConfig, nodes: Vec<Node>) -> Result<Self> {
        cfg.validate()?;
        if nodes.iter().enumerate().any(|(i, n)| n.id != i) {
            return Err(SimError::config("node ids must be 0..n in order"));
        }
        Ok(Simulation {
            engine: engine_for(&cfg),
            cfg,
            nodes,
            next_round: 0,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn next_round(&self) -> u64 {
        self.next_round
    }

    pub fn alive_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    pub fn residual(&self) -> Energy {
        self.nodes.iter().map(|n| n.energy).sum()
    }

    /// Executes the next round.
    pub fn step(&mut self) -> RoundOutcome {
        let out = self.engine.step(&mut self.nodes, self.next_round);
        self.next_round += 1;
        out
    }

    /// Runs to `max_rounds` (or until all nodes are dead under
    /// [`StopRule::AllDead`]) and collects metrics.
    pub fn run(mut self) -> RunMetrics {
        let n = self.nodes.len();
        let half = n - n / 2;
        let initial_energy = self.residual();
        let mut per_round = Vec::with_capacity(self.cfg.max_rounds.min(1 << 20) as usize);
        let mut alive = self.alive_count();
        let mut dead = n - alive;
        let mut packets = 0u64;
        let mut summary = RunSummary {
            nodes: n,
            rounds_executed: 0,
            first_death_round: None,
            half_death_round: None,
            last_death_round: None,
            total_packets: 0,
        };

        while self.next_round < self.cfg.max_rounds {
            let round = self.next_round;
            let out = self.step();
            packets += out.delivered;
            dead += out.deaths.len();
            alive -= out.deaths.len();
            if !out.deaths.is_empty() {
                summary.first_death_round.get_or_insert(round);
                if dead >= half {
                    summary.half_death_round.get_or_insert(round);
                }
                if alive == 0 {
                    summary.last_death_round.get_or_insert(round);
                }
            }
            per_round.push(RoundRecord {
                round,
                alive,
                residual: self.residual(),
                cumulative_packets: packets,
                round_cost: out.cost,
            });
            summary.rounds_executed = round + 1;
            if alive == 0 && self.cfg.stop_rule == StopRule::AllDead {
                break;
            }
        }
        summary.total_packets = packets;

        RunMetrics {
            initial_energy,
            per_round,
            summary,
            node_death_rounds: self.nodes.iter().map(|n| n.death_round).collect(),
        }
    }
}

/// Deploys and runs a scenario.
pub fn run(cfg: &ScenarioConfig) -> Result<RunMetrics> {
    Ok(Simulation::new(cfg.clone())?.run())
}

/// Runs a scenario on a caller-supplied deployment. `cfg.net.n` is ignored.
pub fn run_with_nodes(cfg: &ScenarioConfig, nodes: Vec<Node>) -> Result<RunMetrics> {
    Ok(Simulation::with_nodes(cfg.clone(), nodes)?.run())
}
