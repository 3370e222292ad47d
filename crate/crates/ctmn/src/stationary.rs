//! Stationary distribution of the CTMN.
//!
//! Two independent routes are provided. The primary path is the closed
//! product form: pi_s is proportional to the product of theta_i over the
//! transmitting nodes, normalized by phi. The oracle path assembles the
//! generator matrix from the transition rates and solves the global
//! balance equations directly. A detailed-balance check ties the two to
//! the reversibility of the process.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::statespace::StateSpace;
use crate::topology::Node;

/// Default cap on the state count accepted by the dense balance solver.
pub const ORACLE_STATE_CAP: usize = 4096;

/// Per-node activity ratio theta_i = lambda_i / mu_i_eff, dimensionless.
/// With channel bonding the effective transmission rate is c_i / E[T_i],
/// so theta_i = E[T_i] / (c_i * E[B_i]).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector(pub Vec<f64>);

impl ThetaVector {
    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Compute theta for every node, in canonical order.
pub fn compute_theta(nodes: &[Node]) -> ThetaVector {
    ThetaVector(
        nodes
            .iter()
            .map(|n| n.backoff_rate() / n.tx_rate())
            .collect(),
    )
}

/// Stationary probabilities over the feasible states, in state-space
/// order, plus the normalization constant phi.
#[derive(Debug, Clone)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
    pub phi: f64,
}

impl StationaryDistribution {
    pub fn probability(&self, state_index: usize) -> f64 {
        self.pi[state_index]
    }
}

/// Closed-form product distribution: pi_s = prod_{i in s} theta_i / phi.
///
/// Weights are accumulated in the log domain and exponentiated relative
/// to the largest weight, so extreme theta values do not overflow the
/// normalization. phi itself can still exceed the float range, in which
/// case the parameter range is reported as unsupported.
pub fn product_form(space: &StateSpace, theta: &ThetaVector) -> Result<StationaryDistribution> {
    if theta.0.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::ParameterRange);
    }
    let log_theta: Vec<f64> = theta.0.iter().map(|t| t.ln()).collect();
    let log_w: Vec<f64> = space
        .states()
        .iter()
        .map(|s| s.members().map(|i| log_theta[i]).sum())
        .collect();
    let max_w = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = log_w.iter().map(|w| (w - max_w).exp()).collect();
    let total: f64 = scaled.iter().sum();
    let pi: Vec<f64> = scaled.iter().map(|w| w / total).collect();
    // phi = sum of raw weights = exp(max_w) * total
    let phi = (max_w + total.ln()).exp();
    if !phi.is_finite() {
        return Err(Error::ParameterRange);
    }
    Ok(StationaryDistribution { pi, phi })
}

/// Global-balance oracle: assemble the generator matrix Q from the
/// single-node transition rates and solve pi Q = 0 with the first balance
/// equation replaced by the normalization row. Independent of the product
/// form, used to cross-check it.
pub fn balance_solve(space: &StateSpace, nodes: &[Node]) -> Result<StationaryDistribution> {
    balance_solve_with_cap(space, nodes, ORACLE_STATE_CAP)
}

pub fn balance_solve_with_cap(
    space: &StateSpace,
    nodes: &[Node],
    cap: usize,
) -> Result<StationaryDistribution> {
    let n = space.len();
    if n > cap {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    let mut q = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        for t in space.transitions(k) {
            let rate = if t.up {
                nodes[t.node].backoff_rate()
            } else {
                nodes[t.node].tx_rate()
            };
            q[(k, t.neighbor)] = rate;
            q[(k, k)] -= rate;
        }
    }
    // solve A x = b with A = Q^T, row 0 replaced by the normalization
    let mut a = q.transpose();
    for j in 0..n {
        a[(0, j)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[0] = 1.0;
    let lu = a.clone().lu();
    let x = lu
        .solve(&b)
        .ok_or_else(|| Error::NumericalFailure("singular balance system".into()))?;
    let residual = (&a * &x - &b).amax();
    if residual > 1e-8 {
        return Err(Error::NumericalFailure(format!(
            "ill-conditioned balance system, residual {residual:e}"
        )));
    }
    let pi: Vec<f64> = x.iter().cloned().collect();
    if pi.iter().any(|p| *p < -1e-9) {
        return Err(Error::NumericalFailure("negative probability".into()));
    }
    // empty state is index 0 in the canonical ordering
    let phi = 1.0 / pi[0];
    Ok(StationaryDistribution {
        pi: pi.iter().map(|p| p.max(0.0)).collect(),
        phi,
    })
}

/// Maximum relative detailed-balance residual over all adjacent state
/// pairs: |pi_s * theta_i - pi_{s+i}| / (pi_s * theta_i), taking the
/// up-transition flow in theta form. Zero (up to rounding) for a
/// reversible chain in equilibrium.
pub fn check_detailed_balance(
    space: &StateSpace,
    theta: &ThetaVector,
    dist: &StationaryDistribution,
) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..space.len() {
        for t in space.transitions(k) {
            if !t.up {
                continue;
            }
            let flow_up = dist.pi[k] * theta.get(t.node);
            let flow_down = dist.pi[t.neighbor];
            if flow_up > 0.0 {
                worst = worst.max((flow_up - flow_down).abs() / flow_up);
            }
        }
    }
    worst
}

/// Infinity-norm distance between two distributions over the same space.
pub fn max_abs_difference(a: &StationaryDistribution, b: &StationaryDistribution) -> f64 {
    a.pi.iter()
        .zip(&b.pi)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
