use super::{retire_depleted, try_pay, Node, ProtocolEngine, RoundOutcome};
use crate::energy::CostTable;
use crate::geometry::{distance, sojourn_points, Point, Trajectory};

/// Mobile-sink engine. In round `r` the sink sits at sojourn point
/// `r mod sojourn_count`; nodes within sensing range (inclusive) send one
/// packet, the rest sleep at zero cost.
#[derive(Debug, Clone)]
pub struct Srp {
    stops: Vec<Point>,
    sensing_range: f64,
    costs: CostTable,
}

impl Srp {
    pub(crate) fn new(trajectory: &Trajectory, costs: CostTable) -> Self {
        Srp {
            stops: sojourn_points(trajectory),
            sensing_range: trajectory.sensing_range_m,
            costs,
        }
    }

    pub fn sink_at(&self, round: u64) -> Point {
        self.stops[(round % self.stops.len() as u64) as usize]
    }
}

impl ProtocolEngine for Srp {
    fn step(&mut self, nodes: &mut [Node], round: u64) -> RoundOutcome {
        let sink = self.sink_at(round);
        let mut out = RoundOutcome::default();
        retire_depleted(nodes, round, &mut out);
        for node in nodes.iter_mut().filter(|n| n.alive) {
            let d = distance(node.pos, sink);
            if d <= self.sensing_range && try_pay(node, self.costs.tx(d), round, &mut out) {
                node.packets_sent += 1;
                out.delivered += 1;
            }
        }
        out
    }
}
