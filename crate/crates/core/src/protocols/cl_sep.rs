use super::{retire_depleted, try_pay, Node, ProtocolEngine, RoundOutcome};
use crate::energy::{CostTable, Energy};
use crate::geometry::{distance, Point};

/// Clusterless engine: every alive node sends one packet straight to a static sink.
#[derive(Debug, Clone)]
pub struct ClSep {
    sink: Point,
    costs: CostTable,
    // per-node transmit cost, fixed because nobody moves
    tx_cache: Vec<Energy>,
}

impl ClSep {
    pub(crate) fn new(sink: Point, costs: CostTable) -> Self {
        ClSep {
            sink,
            costs,
            tx_cache: Vec::new(),
        }
    }
}

impl ProtocolEngine for ClSep {
    fn step(&mut self, nodes: &mut [Node], round: u64) -> RoundOutcome {
        if self.tx_cache.len() != nodes.len() {
            self.tx_cache = nodes
                .iter()
                .map(|n| self.costs.tx(distance(n.pos, self.sink)))
                .collect();
        }
        let mut out = RoundOutcome::default();
        retire_depleted(nodes, round, &mut out);
        for (node, &cost) in nodes.iter_mut().zip(&self.tx_cache) {
            if node.alive && try_pay(node, cost, round, &mut out) {
                node.packets_sent += 1;
                out.delivered += 1;
            }
        }
        out
    }
}
