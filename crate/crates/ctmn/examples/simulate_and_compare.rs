//! Event-driven simulation of a scenario, compared against the
//! analytical stationary distribution.
//!
//!     cargo run --release --example simulate_and_compare -- vehicular_pos1 42

use ctmn::scenarios::{build, ParamOverrides, ScenarioId};
use ctmn::sim::{simulate, SimConfig};
use ctmn::statespace::StateSpace;
use ctmn::stationary::{compute_theta, product_form};
use ctmn::throughput::node_throughput;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or("vehicular_pos1".into());
    let seed: u64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(42);
    let id: ScenarioId = name.parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });

    let graph = build(id, &ParamOverrides::default()).unwrap();
    let space = StateSpace::enumerate(&graph).unwrap();
    let dist = product_form(&space, &compute_theta(graph.nodes())).unwrap();
    let analytical = node_throughput(&space, &dist, graph.nodes());

    let config = SimConfig::default_for(&graph, seed);
    println!(
        "{id}: seed {seed}, {} replications of {:.1} s (warmup {:.1} s)",
        config.replications, config.measure, config.warmup
    );
    let result = simulate(&graph, &space, &config).unwrap();

    println!("\nstate        pi (model)   pi (sim)");
    for (k, s) in space.states().iter().enumerate() {
        println!(
            "{:<12} {:>10.6} {:>10.6}",
            s.label(graph.nodes()),
            dist.pi[k],
            result.state_fraction[k]
        );
    }
    println!("\nnode  airtime(model)  airtime(sim) +- 95% CI   throughput(sim) Mb/s");
    for (n, a) in result.per_node.iter().zip(&analytical.per_node) {
        println!(
            "{:<4} {:>13.5} {:>13.5} +- {:.5} {:>14.3} +- {:.3}",
            n.id,
            a.airtime,
            n.airtime.mean,
            n.airtime.half_width,
            n.throughput.mean / 1e6,
            n.throughput.half_width / 1e6
        );
    }
}
