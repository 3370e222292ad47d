//! Analytical throughput as the (uniform) mean backoff varies, showing
//! the starvation regime at aggressive backoffs and the fair regime at
//! conservative ones. Prints CSV to stdout.
//!
//!     cargo run --example backoff_sweep -- plc_chain > sweep.csv

use ctmn::scenarios::{default_backoff_grid, sweep_backoff, ScenarioId};

fn main() {
    let name = std::env::args().nth(1).unwrap_or("plc_chain".into());
    let id: ScenarioId = name.parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });

    let grid = default_backoff_grid(id);
    let table = sweep_backoff(id, &grid).unwrap();

    print!("eb_s");
    for nid in &table.node_ids {
        print!(",x_{nid}_mbps");
    }
    println!();
    for (eb, xs) in &table.rows {
        print!("{eb:e}");
        for x in xs {
            print!(",{:.6}", x / 1e6);
        }
        println!();
    }
}
