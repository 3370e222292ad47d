//! Event-driven simulation of the idealized CSMA/CA dynamics.
//!
//! Each saturated node runs a continuous backoff countdown that only
//! advances while no conflicting neighbor transmits; at expiry it
//! transmits for a sampled duration and immediately draws a new backoff.
//! Propagation delay is zero and conflicting nodes never collide, so the
//! active set is always an independent set of the conflict graph. State
//! occupancy times after warmup give the empirical stationary
//! distribution; per-node airtime and throughput follow.
//!
//! Backoff and transmission-time distributions are pluggable so the
//! insensitivity of the stationary distribution to anything but the means
//! can be checked empirically.

use std::collections::HashMap;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::statespace::StateSpace;
use crate::topology::ConflictGraph;

/// Relative airtime discrepancy tolerated by the insensitivity check.
pub const INSENSITIVITY_TOL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistKind {
    Exponential,
    Deterministic,
    Uniform,
}

impl DistKind {
    pub const ALL: [DistKind; 3] = [
        DistKind::Exponential,
        DistKind::Deterministic,
        DistKind::Uniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistKind::Exponential => "exponential",
            DistKind::Deterministic => "deterministic",
            DistKind::Uniform => "uniform",
        }
    }
}

impl FromStr for DistKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<DistKind> {
        DistKind::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::InvalidSimConfig(format!("unknown distribution `{s}`")))
    }
}

/// A nonnegative duration distribution with the given mean. Uniform
/// spans [0, 2 * mean].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistKind,
    pub mean: f64,
}

impl DistributionSpec {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self.kind {
            DistKind::Exponential => -self.mean * (1.0 - rng.gen::<f64>()).ln(),
            DistKind::Deterministic => self.mean,
            DistKind::Uniform => 2.0 * self.mean * rng.gen::<f64>(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    /// Seconds discarded before measurement starts.
    pub warmup: f64,
    /// Measured seconds per replication.
    pub measure: f64,
    pub replications: usize,
    pub backoff_dist: DistKind,
    pub txtime_dist: DistKind,
}

impl SimConfig {
    /// Defaults scaled to the network: warmup 1e3 and measurement 1e5
    /// times the largest mean transmission time, 10 replications,
    /// exponential distributions.
    pub fn default_for(graph: &ConflictGraph, seed: u64) -> SimConfig {
        let max_et = graph
            .nodes()
            .iter()
            .map(|n| n.tx_time_mean)
            .fold(0.0, f64::max);
        SimConfig {
            seed,
            warmup: 1e3 * max_et,
            measure: 1e5 * max_et,
            replications: 10,
            backoff_dist: DistKind::Exponential,
            txtime_dist: DistKind::Exponential,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.warmup >= 0.0 && self.warmup.is_finite()) {
            return Err(Error::InvalidSimConfig("warmup must be >= 0".into()));
        }
        if !(self.measure > 0.0 && self.measure.is_finite()) {
            return Err(Error::InvalidSimConfig("measure must be > 0".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidSimConfig("need at least 1 replication".into()));
        }
        Ok(())
    }
}

/// Mean and 95% confidence half-width across replications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSim {
    pub id: String,
    pub airtime: Estimate,
    /// Bits per second.
    pub throughput: Estimate,
}

#[derive(Debug, Clone)]
pub struct SimResult {
    pub per_node: Vec<NodeSim>,
    /// Mean empirical time fraction per feasible state, state-space order.
    pub state_fraction: Vec<f64>,
    pub config: SimConfig,
}

struct Replication {
    state_time: Vec<f64>,
    airtime: Vec<f64>,
    throughput: Vec<f64>,
}

/// Run the simulation. Deterministic for a fixed (seed, config, input
/// order): every node gets its own counter-based RNG stream per
/// replication, and replications are merged by index.
pub fn simulate(graph: &ConflictGraph, space: &StateSpace, config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let reps: Vec<Replication> = (0..config.replications)
        .into_par_iter()
        .map(|rep| run_replication(graph, space, config, rep as u64))
        .collect::<Result<Vec<_>>>()?;

    let n = graph.len();
    let t_crit = if config.replications > 1 {
        StudentsT::new(0.0, 1.0, (config.replications - 1) as f64)
            .expect("valid dof")
            .inverse_cdf(0.975)
    } else {
        0.0
    };
    let estimate = |values: &[f64]| -> Estimate {
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let half_width = if values.len() > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            t_crit * (var / k).sqrt()
        } else {
            0.0
        };
        Estimate { mean, half_width }
    };

    let per_node = (0..n)
        .map(|i| {
            let airtimes: Vec<f64> = reps.iter().map(|r| r.airtime[i]).collect();
            let tputs: Vec<f64> = reps.iter().map(|r| r.throughput[i]).collect();
            NodeSim {
                id: graph.node(i).id.clone(),
                airtime: estimate(&airtimes),
                throughput: estimate(&tputs),
            }
        })
        .collect();
    let state_fraction = (0..space.len())
        .map(|k| {
            reps.iter().map(|r| r.state_time[k]).sum::<f64>()
                / (config.replications as f64 * config.measure)
        })
        .collect();
    Ok(SimResult {
        per_node,
        state_fraction,
        config: *config,
    })
}

// splitmix64; spreads (master seed, node, replication) into stream seeds
fn mix_seed(master: u64, node: u64, rep: u64) -> u64 {
    let mut z = master
        .wrapping_add(node.wrapping_mul(0x9e3779b97f4a7c15))
        .wrapping_add(rep.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn run_replication(
    graph: &ConflictGraph,
    space: &StateSpace,
    config: &SimConfig,
    rep: u64,
) -> Result<Replication> {
    let n = graph.len();
    let mut rngs: Vec<ChaCha8Rng> = (0..n)
        .map(|i| ChaCha8Rng::seed_from_u64(mix_seed(config.seed, i as u64, rep)))
        .collect();
    let backoff: Vec<DistributionSpec> = graph
        .nodes()
        .iter()
        .map(|nd| DistributionSpec {
            kind: config.backoff_dist,
            mean: nd.backoff_mean,
        })
        .collect();
    // the effective transmission duration on a bonded channel is E[T]/c
    let txtime: Vec<DistributionSpec> = graph
        .nodes()
        .iter()
        .map(|nd| DistributionSpec {
            kind: config.txtime_dist,
            mean: nd.tx_time_mean / nd.channel_width() as f64,
        })
        .collect();

    let mut remaining: Vec<f64> = (0..n).map(|i| backoff[i].sample(&mut rngs[i])).collect();
    let mut tx_end = vec![f64::INFINITY; n];
    let mut active: u32 = 0;
    let mut now = 0.0;
    let t_stop = config.warmup + config.measure;
    let mut occupancy: HashMap<u32, f64> = HashMap::new();

    loop {
        // next event: earliest transmission end or backoff expiry of an
        // unblocked node; ties resolved by node index via strict `<`
        let mut t_next = f64::INFINITY;
        let mut who = usize::MAX;
        for i in 0..n {
            let cand = if active & (1 << i) != 0 {
                tx_end[i]
            } else if graph.neighbors(i) & active == 0 {
                now + remaining[i]
            } else {
                continue;
            };
            if cand < t_next {
                t_next = cand;
                who = i;
            }
        }
        debug_assert!(who != usize::MAX, "no runnable node");

        let t_event = t_next.min(t_stop);
        // accumulate occupancy of the current state over [now, t_event)
        let from = now.max(config.warmup);
        if t_event > from {
            *occupancy.entry(active).or_insert(0.0) += t_event - from;
        }
        if t_next >= t_stop {
            break;
        }
        let dt = t_next - now;
        for (i, r) in remaining.iter_mut().enumerate() {
            if active & (1 << i) == 0 && graph.neighbors(i) & active == 0 {
                *r = (*r - dt).max(0.0);
            }
        }
        now = t_next;

        if active & (1 << who) != 0 {
            // transmission complete; saturation: draw the next backoff
            active &= !(1 << who);
            tx_end[who] = f64::INFINITY;
            remaining[who] = backoff[who].sample(&mut rngs[who]);
        } else {
            // backoff expired; the active set stays independent because
            // blocked nodes never reach this point
            debug_assert_eq!(graph.neighbors(who) & active, 0);
            active |= 1 << who;
            tx_end[who] = now + txtime[who].sample(&mut rngs[who]);
        }
    }

    let mut state_time = vec![0.0; space.len()];
    let mut total = 0.0;
    for (mask, t) in occupancy {
        let k = space
            .index_of(crate::statespace::FeasibleState(mask))
            .ok_or(Error::UnknownState(mask))?;
        state_time[k] = t;
        total += t;
    }
    if (total - config.measure).abs() / config.measure > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "state times sum to {total}, expected {}",
            config.measure
        )));
    }
    let mut airtime = vec![0.0; n];
    for (k, s) in space.states().iter().enumerate() {
        for i in s.members() {
            airtime[i] += state_time[k] / config.measure;
        }
    }
    let throughput = (0..n)
        .map(|i| {
            let nd = graph.node(i);
            airtime[i] * nd.packet_len_mean * nd.tx_rate()
        })
        .collect();
    Ok(Replication {
        state_time,
        airtime,
        throughput,
    })
}

#[derive(Debug, Clone)]
pub struct InsensitivityNode {
    pub id: String,
    /// Largest pairwise relative airtime difference across combinations.
    pub max_discrepancy: f64,
    /// Whether all pairs of 95% confidence intervals overlap.
    pub ci_overlap: bool,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct InsensitivityReport {
    /// One simulation per (backoff, txtime) distribution combination.
    pub combos: Vec<(DistKind, DistKind, SimResult)>,
    pub per_node: Vec<InsensitivityNode>,
}

impl InsensitivityReport {
    pub fn all_pass(&self) -> bool {
        self.per_node.iter().all(|n| n.pass)
    }
}

/// Run the full {exponential, deterministic, uniform}^2 distribution
/// matrix with identical means and compare per-node airtimes. The
/// stationary behavior should depend on the distributions only through
/// their means.
pub fn insensitivity_check(
    graph: &ConflictGraph,
    space: &StateSpace,
    config: &SimConfig,
) -> Result<InsensitivityReport> {
    let mut combos = Vec::new();
    for b in DistKind::ALL {
        for t in DistKind::ALL {
            let c = SimConfig {
                backoff_dist: b,
                txtime_dist: t,
                ..*config
            };
            combos.push((b, t, simulate(graph, space, &c)?));
        }
    }
    let per_node = (0..graph.len())
        .map(|i| {
            let mut max_disc: f64 = 0.0;
            let mut overlap = true;
            for a in 0..combos.len() {
                for b in a + 1..combos.len() {
                    let x = combos[a].2.per_node[i].airtime;
                    let y = combos[b].2.per_node[i].airtime;
                    let denom = 0.5 * (x.mean + y.mean);
                    if denom > 0.0 {
                        max_disc = max_disc.max((x.mean - y.mean).abs() / denom);
                    }
                    if (x.mean - y.mean).abs() > x.half_width + y.half_width {
                        overlap = false;
                    }
                }
            }
            InsensitivityNode {
                id: graph.node(i).id.clone(),
                max_discrepancy: max_disc,
                ci_overlap: overlap,
                pass: max_disc < INSENSITIVITY_TOL && overlap,
            }
        })
        .collect();
    Ok(InsensitivityReport { combos, per_node })
}
