use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::{
    ch_probability, election_threshold, epoch_length, retire_depleted, try_pay, Node, NodeKind,
    NetworkParams, ProtocolEngine, RoundOutcome,
};
use crate::energy::CostTable;
use crate::geometry::{distance, Point};

/// Clustered engine with a static sink.
///
/// Each round: heads self-elect by threshold draw, members join the nearest
/// head and send one packet to it, heads aggregate and forward one packet to
/// the sink. With no head elected, every node sends straight to the sink.
#[derive(Debug, Clone)]
pub struct Sep {
    sink: Point,
    costs: CostTable,
    p_normal: f64,
    p_advanced: f64,
    rng: ChaCha20Rng,
}

impl Sep {
    pub(crate) fn new(net: &NetworkParams, sink: Point, costs: CostTable, rng: ChaCha20Rng) -> Self {
        Sep {
            sink,
            costs,
            p_normal: ch_probability(net, NodeKind::Normal),
            p_advanced: ch_probability(net, NodeKind::Advanced),
            rng,
        }
    }

    fn probability(&self, kind: NodeKind) -> f64 {
        match kind {
            NodeKind::Normal => self.p_normal,
            NodeKind::Advanced => self.p_advanced,
        }
    }

    /// Draws one uniform per alive node (id order) and returns the elected heads.
    pub fn elect(&mut self, nodes: &mut [Node], round: u64) -> Vec<usize> {
        let mut heads = Vec::new();
        for node in nodes.iter_mut() {
            let p = self.probability(node.kind);
            if round.is_multiple_of(epoch_length(p)) {
                node.ch_eligible = true;
            }
            if !node.alive {
                continue;
            }
            let draw: f64 = self.rng.random();
            if draw < election_threshold(p, round, node.ch_eligible) {
                node.ch_eligible = false;
                heads.push(node.id);
            }
        }
        heads
    }

    /// Runs the transmission phases for a given head set. Depleted nodes must
    /// already be retired.
    pub fn transmit(&self, nodes: &mut [Node], heads: &[usize], round: u64, out: &mut RoundOutcome) {
        if heads.is_empty() {
            for node in nodes.iter_mut().filter(|n| n.alive) {
                let cost = self.costs.tx(distance(node.pos, self.sink));
                if try_pay(node, cost, round, out) {
                    node.packets_sent += 1;
                    out.delivered += 1;
                }
            }
            return;
        }

        let mut received = vec![0u64; nodes.len()];
        let is_head = {
            let mut v = vec![false; nodes.len()];
            for &h in heads {
                v[h] = true;
            }
            v
        };
        let head_pos: Vec<(usize, Point)> = heads.iter().map(|&h| (h, nodes[h].pos)).collect();

        for node in nodes.iter_mut().filter(|n| n.alive && !is_head[n.id]) {
            let mut nearest = None;
            let mut best = f64::INFINITY;
            for &(h, pos) in &head_pos {
                let d = distance(node.pos, pos);
                if d < best {
                    best = d;
                    nearest = Some(h);
                }
            }
            let Some(h) = nearest else { continue };
            if try_pay(node, self.costs.tx(best), round, out) {
                node.packets_sent += 1;
                received[h] += 1;
            }
        }

        for &h in heads {
            let head = &mut nodes[h];
            let members = received[h];
            let cost = self.costs.rx().times(members)
                + self.costs.aggregate(members + 1)
                + self.costs.tx(distance(head.pos, self.sink));
            if try_pay(head, cost, round, out) {
                head.packets_sent += 1;
                out.delivered += 1;
            }
        }
    }

    /// One round with a caller-chosen head set, bypassing election.
    pub fn step_with_heads(&mut self, nodes: &mut [Node], heads: &[usize], round: u64) -> RoundOutcome {
        let mut out = RoundOutcome::default();
        retire_depleted(nodes, round, &mut out);
        let heads: Vec<usize> = heads.iter().copied().filter(|&h| nodes[h].alive).collect();
        self.transmit(nodes, &heads, round, &mut out);
        out.cluster_heads = heads;
        out
    }
}

impl ProtocolEngine for Sep {
    fn step(&mut self, nodes: &mut [Node], round: u64) -> RoundOutcome {
        let mut out = RoundOutcome::default();
        retire_depleted(nodes, round, &mut out);
        let heads = self.elect(nodes, round);
        self.transmit(nodes, &heads, round, &mut out);
        out.cluster_heads = heads;
        out
    }
}
