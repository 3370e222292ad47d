//! Per-node airtime and throughput from a stationary distribution.
//!
//! The airtime of node i is the stationary probability that i is
//! transmitting, summed over all feasible states containing it. The
//! throughput multiplies that fraction by the node's bit rate on its
//! (possibly bonded) channel, E[L_i] / (E[T_i] / c_i).

use crate::statespace::StateSpace;
use crate::stationary::{compute_theta, StationaryDistribution};
use crate::topology::Node;

#[derive(Debug, Clone, PartialEq)]
pub struct NodeThroughput {
    pub id: String,
    pub theta: f64,
    /// Fraction of time the node is transmitting.
    pub airtime: f64,
    /// Bits per second.
    pub throughput: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputReport {
    pub per_node: Vec<NodeThroughput>,
    /// Sum of the per-node throughputs, bits per second.
    pub total: f64,
}

impl ThroughputReport {
    pub fn node(&self, id: &str) -> Option<&NodeThroughput> {
        self.per_node.iter().find(|n| n.id == id)
    }
}

pub fn node_throughput(
    space: &StateSpace,
    dist: &StationaryDistribution,
    nodes: &[Node],
) -> ThroughputReport {
    let theta = compute_theta(nodes);
    let mut airtime = vec![0.0; nodes.len()];
    for (k, s) in space.states().iter().enumerate() {
        for i in s.members() {
            airtime[i] += dist.pi[k];
        }
    }
    let per_node: Vec<NodeThroughput> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| NodeThroughput {
            id: n.id.clone(),
            theta: theta.get(i),
            airtime: airtime[i],
            throughput: n.packet_len_mean * n.tx_rate() * airtime[i],
        })
        .collect();
    let total = per_node.iter().map(|n| n.throughput).sum();
    ThroughputReport { per_node, total }
}
