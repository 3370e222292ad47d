//! Built-in reference networks.
//!
//! Three network families with reference parameters, ready for analysis
//! or simulation:
//!
//! - `vehicular_pos1` / `vehicular_pos2`: three transmitting cars A, B, D
//!   in two geometric configurations. In position 1 the oncoming group is
//!   still approaching, so B and D do not hear each other and {B, D} is
//!   feasible; in position 2 all three are mutually in range (a clique).
//! - `plc_chain`: a five-node relay chain A..E where each node defers to
//!   its one- and two-hop neighbors.
//! - `wlan_bonding`: five co-located WLANs on 8 basic channels with
//!   widths (1, 1, 2, 4, 8); overlap in any basic channel is a conflict.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::statespace::StateSpace;
use crate::stationary::{compute_theta, product_form};
use crate::throughput::node_throughput;
use crate::topology::{ConflictGraph, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    VehicularPos1,
    VehicularPos2,
    PlcChain,
    WlanBonding,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 4] = [
        ScenarioId::VehicularPos1,
        ScenarioId::VehicularPos2,
        ScenarioId::PlcChain,
        ScenarioId::WlanBonding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::VehicularPos1 => "vehicular_pos1",
            ScenarioId::VehicularPos2 => "vehicular_pos2",
            ScenarioId::PlcChain => "plc_chain",
            ScenarioId::WlanBonding => "wlan_bonding",
        }
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<ScenarioId> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

impl std::fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameter overrides for a built-in scenario: uniform values applied to
/// every node, then per-node entries keyed by id. Only E[B], E[T] and
/// E[L] may be overridden.
#[derive(Debug, Clone, Default)]
pub struct ParamOverrides {
    pub eb: Option<f64>,
    pub et: Option<f64>,
    pub el: Option<f64>,
    pub per_node: BTreeMap<String, NodeParams>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NodeParams {
    pub eb: Option<f64>,
    pub et: Option<f64>,
    pub el: Option<f64>,
}

impl ParamOverrides {
    pub fn uniform(eb: Option<f64>, et: Option<f64>, el: Option<f64>) -> ParamOverrides {
        ParamOverrides {
            eb,
            et,
            el,
            per_node: BTreeMap::new(),
        }
    }

    fn check_positive(&self) -> Result<()> {
        let all = self
            .per_node
            .values()
            .flat_map(|p| [p.eb, p.et, p.el])
            .chain([self.eb, self.et, self.el]);
        for v in all.flatten() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidOverride(format!(
                    "parameters must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn apply(&self, nodes: &mut [Node]) -> Result<()> {
        self.check_positive()?;
        for n in nodes.iter_mut() {
            if let Some(eb) = self.eb {
                n.backoff_mean = eb;
            }
            if let Some(et) = self.et {
                n.tx_time_mean = et;
            }
            if let Some(el) = self.el {
                n.packet_len_mean = el;
            }
        }
        for (id, p) in &self.per_node {
            let n = nodes
                .iter_mut()
                .find(|n| &n.id == id)
                .ok_or_else(|| Error::InvalidOverride(format!("unknown node id `{id}`")))?;
            if let Some(eb) = p.eb {
                n.backoff_mean = eb;
            }
            if let Some(et) = p.et {
                n.tx_time_mean = et;
            }
            if let Some(el) = p.el {
                n.packet_len_mean = el;
            }
        }
        Ok(())
    }
}

// Reference parameters. The vehicular and PLC sources fix E[T] and E[L]
// but sweep E[B]; the default here is E[B] = E[T] (theta = 1) as a
// representative operating point.
const VEHICULAR_ET: f64 = 3e-3;
const VEHICULAR_EL: f64 = 8000.0;
const PLC_ET: f64 = 1359.02e-6;
const PLC_EL: f64 = 12000.0;
const BONDING_ET: f64 = 1e-4;
const BONDING_EB: f64 = 50e-6;
const BONDING_EL: f64 = 12000.0;

/// Construct a built-in scenario, applying any overrides.
pub fn build(id: ScenarioId, overrides: &ParamOverrides) -> Result<ConflictGraph> {
    match id {
        ScenarioId::VehicularPos1 | ScenarioId::VehicularPos2 => {
            let mut nodes: Vec<Node> = ["A", "B", "D"]
                .iter()
                .map(|s| Node::new(s, VEHICULAR_ET, VEHICULAR_ET, VEHICULAR_EL))
                .collect();
            overrides.apply(&mut nodes)?;
            let pairs: &[(&str, &str)] = if id == ScenarioId::VehicularPos1 {
                // A hears both groups, B and D do not hear each other
                &[("A", "B"), ("A", "D")]
            } else {
                &[("A", "B"), ("A", "D"), ("B", "D")]
            };
            ConflictGraph::from_pairs(nodes, pairs)
        }
        ScenarioId::PlcChain => {
            let ids = ["A", "B", "C", "D", "E"];
            let mut nodes: Vec<Node> = ids
                .iter()
                .map(|s| Node::new(s, PLC_ET, PLC_ET, PLC_EL))
                .collect();
            overrides.apply(&mut nodes)?;
            // chain rule: defer to one- and two-hop neighbors
            let mut pairs = Vec::new();
            for i in 0..ids.len() {
                for j in i + 1..ids.len() {
                    if j - i <= 2 {
                        pairs.push((ids[i], ids[j]));
                    }
                }
            }
            ConflictGraph::from_pairs(nodes, &pairs)
        }
        ScenarioId::WlanBonding => {
            let mut nodes = vec![
                Node::new("A", BONDING_EB, BONDING_ET, BONDING_EL).with_channels([1]),
                Node::new("B", BONDING_EB, BONDING_ET, BONDING_EL).with_channels([5]),
                Node::new("C", BONDING_EB, BONDING_ET, BONDING_EL).with_channels([7, 8]),
                Node::new("D", BONDING_EB, BONDING_ET, BONDING_EL).with_channels([1, 2, 3, 4]),
                Node::new("E", BONDING_EB, BONDING_ET, BONDING_EL).with_channels(1..=8),
            ];
            overrides.apply(&mut nodes)?;
            ConflictGraph::from_channels(nodes)
        }
    }
}

/// One row per backoff-mean grid point with the analytical per-node
/// throughput (bits per second) at that point.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub node_ids: Vec<String>,
    /// (E[B] seconds, throughput per node in `node_ids` order).
    pub rows: Vec<(f64, Vec<f64>)>,
}

/// Analytical throughput sweep over a grid of uniform backoff means.
pub fn sweep_backoff(id: ScenarioId, eb_grid: &[f64]) -> Result<SweepTable> {
    if eb_grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if eb_grid.iter().any(|v| !(v > &0.0 && v.is_finite())) {
        return Err(Error::InvalidGrid("grid values must be positive".into()));
    }
    let node_ids: Vec<String> = build(id, &ParamOverrides::default())?
        .nodes()
        .iter()
        .map(|n| n.id.clone())
        .collect();
    let rows: Vec<(f64, Vec<f64>)> = eb_grid
        .par_iter()
        .map(|&eb| -> Result<(f64, Vec<f64>)> {
            let g = build(id, &ParamOverrides::uniform(Some(eb), None, None))?;
            let sp = StateSpace::enumerate(&g)?;
            let dist = product_form(&sp, &compute_theta(g.nodes()))?;
            let report = node_throughput(&sp, &dist, g.nodes());
            Ok((eb, report.per_node.iter().map(|n| n.throughput).collect()))
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable { node_ids, rows })
}

/// Default figure grid: 50 log-spaced backoff means spanning
/// [E[T]/100, 10 E[T]], covering starvation through fairness regimes.
pub fn default_backoff_grid(id: ScenarioId) -> Vec<f64> {
    let et = match id {
        ScenarioId::VehicularPos1 | ScenarioId::VehicularPos2 => VEHICULAR_ET,
        ScenarioId::PlcChain => PLC_ET,
        ScenarioId::WlanBonding => BONDING_ET,
    };
    log_spaced(et / 100.0, 10.0 * et, 50)
}

pub fn log_spaced(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), stop.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}
