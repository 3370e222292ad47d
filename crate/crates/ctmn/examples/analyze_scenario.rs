//! Analytical throughput for one of the built-in scenarios.
//!
//!     cargo run --example analyze_scenario -- wlan_bonding

use ctmn::scenarios::{build, ParamOverrides, ScenarioId};
use ctmn::statespace::StateSpace;
use ctmn::stationary::{compute_theta, product_form};
use ctmn::throughput::node_throughput;

fn main() {
    let name = std::env::args().nth(1).unwrap_or("wlan_bonding".into());
    let id: ScenarioId = name.parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });

    let graph = build(id, &ParamOverrides::default()).unwrap();
    let space = StateSpace::enumerate(&graph).unwrap();
    let theta = compute_theta(graph.nodes());
    let dist = product_form(&space, &theta).unwrap();
    let report = node_throughput(&space, &dist, graph.nodes());

    println!("{id}: {} nodes, {} feasible states, phi = {}", graph.len(), space.len(), dist.phi);
    println!("\nstate            pi");
    for (k, s) in space.states().iter().enumerate() {
        println!("{:<12} {:>10.6}", s.label(graph.nodes()), dist.pi[k]);
    }
    println!("\nnode  theta    airtime  throughput (Mb/s)");
    for n in &report.per_node {
        println!("{:<4} {:>6.3} {:>9.4} {:>12.4}", n.id, n.theta, n.airtime, n.throughput / 1e6);
    }
    println!("\ntotal {:.4} Mb/s", report.total / 1e6);
}
