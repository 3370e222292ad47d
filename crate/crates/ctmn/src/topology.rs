//! Nodes and conflict-graph construction.
//!
//! A conflict graph joins two nodes when they cannot transmit
//! simultaneously. Three builders are provided: explicit conflict pairs,
//! geometric carrier-sense ranges, and basic-channel overlap.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::MAX_NODES;

/// One CSMA/CA contender.
///
/// `backoff_mean` is E[B] in seconds, `tx_time_mean` is E[T] in seconds
/// for a single basic channel, `packet_len_mean` is E[L] in bits.
/// `channels` holds the basic-channel indices when the network is built
/// from channel allocations; a node bonding `c` channels transmits `c`
/// times faster. `position` (meters) and `cs_range` (meters) are used by
/// the geometric builder.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub backoff_mean: f64,
    pub tx_time_mean: f64,
    pub packet_len_mean: f64,
    pub channels: Option<BTreeSet<u16>>,
    pub position: Option<[f64; 2]>,
    pub cs_range: Option<f64>,
}

impl Node {
    pub fn new(id: &str, backoff_mean: f64, tx_time_mean: f64, packet_len_mean: f64) -> Node {
        Node {
            id: id.to_string(),
            backoff_mean,
            tx_time_mean,
            packet_len_mean,
            channels: None,
            position: None,
            cs_range: None,
        }
    }

    pub fn with_channels<I: IntoIterator<Item = u16>>(mut self, channels: I) -> Node {
        self.channels = Some(channels.into_iter().collect());
        self
    }

    pub fn with_position(mut self, x: f64, y: f64, cs_range: f64) -> Node {
        self.position = Some([x, y]);
        self.cs_range = Some(cs_range);
        self
    }

    /// Number of bonded basic channels (1 when no channel set is given).
    pub fn channel_width(&self) -> usize {
        self.channels.as_ref().map_or(1, |c| c.len())
    }

    /// Backoff rate lambda = 1/E[B], per second.
    pub fn backoff_rate(&self) -> f64 {
        1.0 / self.backoff_mean
    }

    /// Effective transmission completion rate c/E[T], per second.
    pub fn tx_rate(&self) -> f64 {
        self.channel_width() as f64 / self.tx_time_mean
    }

    fn validate(&self) -> Result<()> {
        let checks = [
            ("backoff mean", self.backoff_mean),
            ("transmission time mean", self.tx_time_mean),
            ("packet length mean", self.packet_len_mean),
        ];
        for (what, value) in checks {
            // NaN falls through the first test and fails is_finite
            if value <= 0.0 || !value.is_finite() {
                return Err(Error::NonPositiveParameter {
                    id: self.id.clone(),
                    what,
                    value,
                });
            }
        }
        if let Some(chs) = &self.channels {
            if chs.is_empty() {
                return Err(Error::EmptyChannelSet(self.id.clone()));
            }
            let lo = *chs.iter().next().unwrap() as usize;
            let hi = *chs.iter().last().unwrap() as usize;
            let contiguous = hi - lo + 1 == chs.len();
            if !contiguous || !chs.len().is_power_of_two() {
                return Err(Error::InvalidChannelSet(self.id.clone()));
            }
        }
        Ok(())
    }
}

/// Symmetric, irreflexive "cannot transmit simultaneously" relation over
/// an ordered node list. The node order is canonical: every downstream
/// bit-vector uses it.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    nodes: Vec<Node>,
    adj: Vec<u32>,
}

impl ConflictGraph {
    /// Explicit mode: edges are exactly the given id pairs, symmetrized.
    pub fn from_pairs<S: AsRef<str>>(nodes: Vec<Node>, pairs: &[(S, S)]) -> Result<ConflictGraph> {
        let mut g = ConflictGraph::with_nodes(nodes)?;
        let index: HashMap<String, usize> = g
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();
        for (a, b) in pairs {
            let (a, b) = (a.as_ref(), b.as_ref());
            let i = *index.get(a).ok_or_else(|| Error::UnknownId(a.into()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownId(b.into()))?;
            if i == j {
                return Err(Error::SelfConflict(a.into()));
            }
            g.adj[i] |= 1 << j;
            g.adj[j] |= 1 << i;
        }
        Ok(g)
    }

    /// Geometric mode: nodes conflict when their distance is within the
    /// larger of the two carrier-sense ranges. Using the max keeps the
    /// relation symmetric, which the reversible CTMN requires.
    pub fn from_geometry(nodes: Vec<Node>) -> Result<ConflictGraph> {
        for n in &nodes {
            if n.position.is_none() || n.cs_range.is_none() {
                return Err(Error::MissingGeometry(n.id.clone()));
            }
        }
        let mut g = ConflictGraph::with_nodes(nodes)?;
        for i in 0..g.nodes.len() {
            for j in i + 1..g.nodes.len() {
                let [xi, yi] = g.nodes[i].position.unwrap();
                let [xj, yj] = g.nodes[j].position.unwrap();
                let dist = ((xi - xj).powi(2) + (yi - yj).powi(2)).sqrt();
                let range = g.nodes[i].cs_range.unwrap().max(g.nodes[j].cs_range.unwrap());
                if dist <= range {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            }
        }
        Ok(g)
    }

    /// Channel-overlap mode: nodes conflict when their channel sets
    /// intersect. Assumes all nodes are mutually within carrier sense.
    pub fn from_channels(nodes: Vec<Node>) -> Result<ConflictGraph> {
        for n in &nodes {
            match &n.channels {
                None => return Err(Error::EmptyChannelSet(n.id.clone())),
                Some(c) if c.is_empty() => return Err(Error::EmptyChannelSet(n.id.clone())),
                Some(_) => {}
            }
        }
        let mut g = ConflictGraph::with_nodes(nodes)?;
        for i in 0..g.nodes.len() {
            for j in i + 1..g.nodes.len() {
                let ci = g.nodes[i].channels.as_ref().unwrap();
                let cj = g.nodes[j].channels.as_ref().unwrap();
                if ci.intersection(cj).next().is_some() {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            }
        }
        Ok(g)
    }

    fn with_nodes(nodes: Vec<Node>) -> Result<ConflictGraph> {
        if nodes.len() > MAX_NODES {
            return Err(Error::TooManyNodes(nodes.len()));
        }
        let mut seen = BTreeSet::new();
        for n in &nodes {
            n.validate()?;
            if !seen.insert(n.id.clone()) {
                return Err(Error::DuplicateId(n.id.clone()));
            }
        }
        let adj = vec![0; nodes.len()];
        Ok(ConflictGraph { nodes, adj })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    /// Neighbor set of node `i` as a bitmask over the canonical order.
    pub fn neighbors(&self, i: usize) -> u32 {
        self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i] & (1 << j) != 0
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    /// All edges as (i, j) with i < j.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.nodes.len() {
            for j in i + 1..self.nodes.len() {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}
