//! Per-round protocol engines.
//!
//! * [`Sep`]: clustered routing with heterogeneity-weighted head election and
//!   a static sink.
//! * [`ClSep`]: every alive node sends straight to a static sink.
//! * [`Srp`]: clusterless with a mobile sink; nodes transmit only while the
//!   sink is within sensing range and sleep (for free) otherwise.
//!
//! All engines share the same death rule: a node pays a cost only if its
//! battery covers it in full. A node that cannot pay spends nothing, delivers
//! nothing and dies in that round. A node that drains to exactly zero is
//! retired at the start of the following round.

mod cl_sep;
mod sep;
mod srp;

pub use cl_sep::ClSep;
pub use sep::Sep;
pub use srp::Srp;

use serde::{Deserialize, Serialize};

use crate::energy::Energy;
use crate::error::{Result, SimError};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    #[serde(rename = "SEP")]
    Sep,
    #[serde(rename = "CL_SEP")]
    ClSep,
    #[serde(rename = "SRP")]
    Srp,
}

impl ProtocolKind {
    pub fn wants_mobile_sink(self) -> bool {
        matches!(self, ProtocolKind::Srp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Normal,
    Advanced,
}

/// Population and heterogeneity settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkParams {
    pub n: usize,
    /// Fraction of advanced nodes.
    pub m: f64,
    /// Extra energy factor of advanced nodes.
    pub alpha: f64,
    /// Initial energy of a normal node, joules.
    pub e0: f64,
    /// Optimal cluster-head probability.
    pub p_opt: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            n: 100,
            m: 0.1,
            alpha: 1.0,
            e0: 0.5,
            p_opt: 0.1,
        }
    }
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(SimError::config("network needs at least one node"));
        }
        if !(0.0..=1.0).contains(&self.m) {
            return Err(SimError::config(format!("advanced fraction m={} outside [0,1]", self.m)));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(SimError::config(format!("alpha={} must be >= 0", self.alpha)));
        }
        if !(self.e0.is_finite() && self.e0 > 0.0) {
            return Err(SimError::config(format!("e0={} must be positive", self.e0)));
        }
        if !(self.p_opt > 0.0 && self.p_opt <= 1.0) {
            return Err(SimError::config(format!("p_opt={} outside (0,1]", self.p_opt)));
        }
        Ok(())
    }

    /// Number of advanced nodes actually deployed: `round(m * n)`.
    pub fn advanced_count(&self) -> usize {
        (self.m * self.n as f64).round() as usize
    }

    pub fn initial_energy(&self, kind: NodeKind) -> f64 {
        match kind {
            NodeKind::Normal => self.e0,
            NodeKind::Advanced => self.e0 * (1.0 + self.alpha),
        }
    }
}

/// Cluster-head election probability weighted by initial energy.
pub fn ch_probability(np: &NetworkParams, kind: NodeKind) -> f64 {
    let denom = 1.0 + np.alpha * np.m;
    match kind {
        NodeKind::Normal => np.p_opt / denom,
        NodeKind::Advanced => np.p_opt * (1.0 + np.alpha) / denom,
    }
}

/// Rounds per election epoch, `ceil(1/p)`, tolerant of `1/p` landing a hair
/// above an integer through rounding (e.g. `p = 0.1/1.1`).
pub fn epoch_length(p: f64) -> u64 {
    let inv = 1.0 / p;
    let nearest = inv.round();
    if (inv - nearest).abs() <= 1e-9 * inv {
        nearest.max(1.0) as u64
    } else {
        inv.ceil().max(1.0) as u64
    }
}

/// Rotating self-election threshold `p / (1 - p * (r mod epoch))`, zero for
/// nodes that already served this epoch, clamped to 1 in the last slot.
pub fn election_threshold(p: f64, round: u64, in_set_g: bool) -> f64 {
    if !in_set_g {
        return 0.0;
    }
    let slot = (round % epoch_length(p)) as f64;
    let denom = 1.0 - p * slot;
    if denom <= 0.0 {
        1.0
    } else {
        (p / denom).min(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub pos: Point,
    pub kind: NodeKind,
    pub energy: Energy,
    pub initial_energy: Energy,
    pub alive: bool,
    /// Still eligible to head a cluster in the current epoch.
    pub ch_eligible: bool,
    pub packets_sent: u64,
    /// Round in which the node was retired.
    pub death_round: Option<u64>,
}

impl Node {
    pub fn new(id: usize, pos: Point, kind: NodeKind, energy_j: f64) -> Self {
        let energy = Energy::from_joules(energy_j);
        Node {
            id,
            pos,
            kind,
            energy,
            initial_energy: energy,
            alive: true,
            ch_eligible: true,
            packets_sent: 0,
            death_round: None,
        }
    }

    pub fn energy_j(&self) -> f64 {
        self.energy.joules()
    }
}

/// What happened in one round.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoundOutcome {
    /// Total energy drawn from node batteries.
    pub cost: Energy,
    /// Packets that reached the sink.
    pub delivered: u64,
    /// Nodes retired this round, in id order.
    pub deaths: Vec<usize>,
    /// Cluster heads elected this round (SEP only).
    pub cluster_heads: Vec<usize>,
}

/// Common interface of the per-round engines.
pub trait ProtocolEngine {
    fn step(&mut self, nodes: &mut [Node], round: u64) -> RoundOutcome;
}

/// Retires nodes whose battery reached zero in an earlier round.
pub(crate) fn retire_depleted(nodes: &mut [Node], round: u64, out: &mut RoundOutcome) {
    for node in nodes.iter_mut().filter(|n| n.alive && n.energy.is_zero()) {
        kill(node, round, out);
    }
}

fn kill(node: &mut Node, round: u64, out: &mut RoundOutcome) {
    node.alive = false;
    node.death_round = Some(round);
    out.deaths.push(node.id);
}

/// Debits `cost` if the node can cover it; otherwise the node dies untouched.
pub(crate) fn try_pay(node: &mut Node, cost: Energy, round: u64, out: &mut RoundOutcome) -> bool {
    match node.energy.checked_sub(cost) {
        Some(rest) => {
            node.energy = rest;
            out.cost += cost;
            true
        }
        None => {
            kill(node, round, out);
            false
        }
    }
}
