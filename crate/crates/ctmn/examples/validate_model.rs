//! Cross-check the closed-form stationary distribution against a dense
//! solve of the global balance equations, and verify detailed balance.
//!
//!     cargo run --example validate_model

use ctmn::scenarios::{build, ParamOverrides, ScenarioId};
use ctmn::statespace::StateSpace;
use ctmn::stationary::{
    balance_solve, check_detailed_balance, compute_theta, max_abs_difference, product_form,
};

fn main() {
    for id in ScenarioId::ALL {
        let graph = build(id, &ParamOverrides::default()).unwrap();
        let space = StateSpace::enumerate(&graph).unwrap();
        let theta = compute_theta(graph.nodes());
        let closed = product_form(&space, &theta).unwrap();
        let solved = balance_solve(&space, graph.nodes()).unwrap();
        let gap = max_abs_difference(&closed, &solved);
        let residual = check_detailed_balance(&space, &theta, &closed);
        println!(
            "{id:<15} |pi - pi_solved|_inf = {gap:.3e}, detailed balance residual = {residual:.3e}"
        );
    }
}
