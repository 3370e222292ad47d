//! Distribution insensitivity: the stationary airtimes should depend on
//! the backoff and transmission-time distributions only through their
//! means. Runs the full {exponential, deterministic, uniform}^2 matrix.
//!
//! Note the caveat with both distributions deterministic on a topology
//! that is not a full clique: the sample path then has no randomness at
//! all and can lock into a periodic orbit that time-averages to something
//! other than the product form. Try `vehicular_pos1` to see that combo
//! fail honestly; on the clique `vehicular_pos2` every combo passes.
//!
//!     cargo run --release --example insensitivity -- vehicular_pos2

use ctmn::scenarios::{build, ParamOverrides, ScenarioId};
use ctmn::sim::{insensitivity_check, SimConfig, INSENSITIVITY_TOL};
use ctmn::statespace::StateSpace;

fn main() {
    let name = std::env::args().nth(1).unwrap_or("vehicular_pos2".into());
    let id: ScenarioId = name.parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });

    let graph = build(id, &ParamOverrides::default()).unwrap();
    let space = StateSpace::enumerate(&graph).unwrap();
    let config = SimConfig::default_for(&graph, 7);
    let report = insensitivity_check(&graph, &space, &config).unwrap();

    println!("{id}: airtime per (backoff, txtime) distribution combination\n");
    print!("node");
    for (b, t, _) in &report.combos {
        print!(" {:>9}", format!("{}/{}", &b.name()[..3], &t.name()[..3]));
    }
    println!();
    for i in 0..graph.len() {
        print!("{:<4}", graph.node(i).id);
        for (_, _, r) in &report.combos {
            print!(" {:>9.5}", r.per_node[i].airtime.mean);
        }
        println!();
    }
    println!("\nnode  max pairwise discrepancy (tol {INSENSITIVITY_TOL})  verdict");
    for n in &report.per_node {
        println!(
            "{:<4} {:>12.4e}  {}",
            n.id,
            n.max_discrepancy,
            if n.pass { "PASS" } else { "FAIL" }
        );
    }
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
