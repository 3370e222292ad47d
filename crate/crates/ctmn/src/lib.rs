//! Throughput analysis of CSMA/CA networks modeled as continuous-time
//! Markov networks (CTMN).
//!
//! A network is described by a set of contending nodes and a conflict
//! graph (which pairs cannot transmit at the same time). The feasible
//! network states are the independent sets of that graph. Because the
//! idealized CSMA/CA dynamics (continuous exponential backoff, freeze on
//! busy, zero propagation delay) form a reversible Markov process, the
//! stationary distribution has a product form: the probability of a state
//! is proportional to the product of its members' activity ratios
//! `theta_i = E[T_i] / (c_i * E[B_i])`. Per-node airtime and throughput
//! follow directly.
//!
//! The crate provides:
//! - [`topology`]: nodes and three conflict-graph builders (explicit
//!   pairs, geometric carrier-sense ranges, channel overlap),
//! - [`statespace`]: enumeration of the feasible states and the
//!   single-node transition structure,
//! - [`stationary`]: the product-form distribution, a generator-matrix
//!   balance solver used as an independent oracle, and a detailed-balance
//!   check,
//! - [`throughput`]: per-node airtime and throughput reports,
//! - [`sim`]: an event-driven simulator with pluggable backoff and
//!   transmission-time distributions, for empirical validation including
//!   the insensitivity property,
//! - [`scenarios`]: built-in vehicular, PLC-chain and WLAN
//!   channel-bonding networks with reference parameters,
//! - [`config`] and [`cli`]: the JSON network format and the command-line
//!   front end.
//!
//! See the crate examples for runnable entry points into each capability.

pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod scenarios;
pub mod sim;
pub mod statespace;
pub mod stationary;
pub mod throughput;
pub mod topology;

pub use error::Error;
pub use statespace::{FeasibleState, StateSpace};
pub use stationary::{StationaryDistribution, ThetaVector};
pub use throughput::ThroughputReport;
pub use topology::{ConflictGraph, Node};

/// Largest supported network: states must fit a single `u32` bit-vector.
pub const MAX_NODES: usize = 32;

/// Default cap on the number of enumerated feasible states.
pub const DEFAULT_STATE_CAP: usize = 1 << 20;
