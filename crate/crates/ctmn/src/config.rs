//! JSON network description files.
//!
//! ```json
//! {
//!   "mode": "pairs",
//!   "nodes": [
//!     { "id": "A", "eb_s": 200e-6, "et_s": 1e-3, "el_bits": 8000 },
//!     { "id": "B", "eb_s": 200e-6, "et_s": 1e-3, "el_bits": 8000 }
//!   ],
//!   "conflicts": [["A", "B"]]
//! }
//! ```
//!
//! `mode` selects the conflict-graph builder and dictates which fields
//! must be present: `pairs` requires `conflicts`, `geometry` requires
//! `x`/`y`/`cs_range` on every node, `channels` requires `channels` on
//! every node. Fields belonging to another mode are rejected.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::topology::{ConflictGraph, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Pairs,
    Geometry,
    Channels,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub id: String,
    /// Mean backoff duration E[B], seconds.
    pub eb_s: f64,
    /// Mean transmission time E[T] on one basic channel, seconds.
    pub et_s: f64,
    /// Mean packet length E[L], bits.
    pub el_bits: f64,
    pub channels: Option<Vec<u16>>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub cs_range: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfigFile {
    pub mode: Mode,
    pub nodes: Vec<NodeConfig>,
    pub conflicts: Option<Vec<(String, String)>>,
}

impl FromStr for NetworkConfigFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<NetworkConfigFile> {
        let file: NetworkConfigFile =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.check_mode_fields()?;
        Ok(file)
    }
}

impl NetworkConfigFile {
    pub fn from_path(path: &Path) -> Result<NetworkConfigFile> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    fn check_mode_fields(&self) -> Result<()> {
        let forbid = |cond: bool, what: &str, id: &str| -> Result<()> {
            if cond {
                Err(Error::Config(format!(
                    "node `{id}`: field `{what}` is not allowed in {:?} mode",
                    self.mode
                )))
            } else {
                Ok(())
            }
        };
        match self.mode {
            Mode::Pairs => {
                if self.conflicts.is_none() {
                    return Err(Error::Config(
                        "mode `pairs` requires a `conflicts` array".into(),
                    ));
                }
                for n in &self.nodes {
                    forbid(n.channels.is_some(), "channels", &n.id)?;
                    forbid(
                        n.x.is_some() || n.y.is_some() || n.cs_range.is_some(),
                        "x/y/cs_range",
                        &n.id,
                    )?;
                }
            }
            Mode::Geometry => {
                if self.conflicts.is_some() {
                    return Err(Error::Config(
                        "`conflicts` is only allowed in `pairs` mode".into(),
                    ));
                }
                for n in &self.nodes {
                    forbid(n.channels.is_some(), "channels", &n.id)?;
                    if n.x.is_none() || n.y.is_none() || n.cs_range.is_none() {
                        return Err(Error::Config(format!(
                            "node `{}`: mode `geometry` requires x, y and cs_range",
                            n.id
                        )));
                    }
                }
            }
            Mode::Channels => {
                if self.conflicts.is_some() {
                    return Err(Error::Config(
                        "`conflicts` is only allowed in `pairs` mode".into(),
                    ));
                }
                for n in &self.nodes {
                    forbid(
                        n.x.is_some() || n.y.is_some() || n.cs_range.is_some(),
                        "x/y/cs_range",
                        &n.id,
                    )?;
                    if n.channels.is_none() {
                        return Err(Error::Config(format!(
                            "node `{}`: mode `channels` requires a channel set",
                            n.id
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Apply uniform parameter overrides before graph construction.
    pub fn apply_uniform(&mut self, eb: Option<f64>, et: Option<f64>, el: Option<f64>) {
        for n in &mut self.nodes {
            if let Some(eb) = eb {
                n.eb_s = eb;
            }
            if let Some(et) = et {
                n.et_s = et;
            }
            if let Some(el) = el {
                n.el_bits = el;
            }
        }
    }

    pub fn to_graph(&self) -> Result<ConflictGraph> {
        let nodes: Vec<Node> = self
            .nodes
            .iter()
            .map(|c| {
                let mut n = Node::new(&c.id, c.eb_s, c.et_s, c.el_bits);
                if let Some(chs) = &c.channels {
                    n = n.with_channels(chs.iter().copied());
                }
                if let (Some(x), Some(y), Some(r)) = (c.x, c.y, c.cs_range) {
                    n = n.with_position(x, y, r);
                }
                n
            })
            .collect();
        match self.mode {
            Mode::Pairs => {
                let pairs = self.conflicts.clone().unwrap_or_default();
                ConflictGraph::from_pairs(nodes, &pairs)
            }
            Mode::Geometry => ConflictGraph::from_geometry(nodes),
            Mode::Channels => ConflictGraph::from_channels(nodes),
        }
    }
}
