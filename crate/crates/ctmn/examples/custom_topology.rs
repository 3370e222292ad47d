//! The three ways to declare which nodes conflict: explicit pairs,
//! planar positions with carrier-sense ranges, and overlapping channel
//! sets. All three produce the same ConflictGraph type.
//!
//!     cargo run --example custom_topology

use ctmn::statespace::StateSpace;
use ctmn::stationary::{compute_theta, product_form};
use ctmn::throughput::node_throughput;
use ctmn::topology::{ConflictGraph, Node};

fn show(title: &str, graph: &ConflictGraph) {
    let space = StateSpace::enumerate(graph).unwrap();
    let dist = product_form(&space, &compute_theta(graph.nodes())).unwrap();
    let report = node_throughput(&space, &dist, graph.nodes());
    let edges: Vec<String> = graph
        .edges()
        .iter()
        .map(|&(i, j)| format!("{}-{}", graph.node(i).id, graph.node(j).id))
        .collect();
    println!("{title}");
    println!("  edges: {}", if edges.is_empty() { "none".into() } else { edges.join(" ") });
    println!("  {} feasible states", space.len());
    for n in &report.per_node {
        println!("  {}: airtime {:.4}, {:.3} Mb/s", n.id, n.airtime, n.throughput / 1e6);
    }
    println!();
}

fn main() {
    // explicit pairs: a 3-node chain, the middle node conflicts with both ends
    let nodes = vec![
        Node::new("A", 1e-3, 1e-3, 8000.0),
        Node::new("B", 1e-3, 1e-3, 8000.0),
        Node::new("C", 1e-3, 1e-3, 8000.0),
    ];
    let g = ConflictGraph::from_pairs(nodes, &[("A", "B"), ("B", "C")]).unwrap();
    show("pairs: chain A-B-C", &g);

    // geometry: conflict when within the larger carrier-sense range
    let nodes = vec![
        Node::new("A", 1e-3, 1e-3, 8000.0).with_position(0.0, 0.0, 150.0),
        Node::new("B", 1e-3, 1e-3, 8000.0).with_position(100.0, 0.0, 150.0),
        Node::new("C", 1e-3, 1e-3, 8000.0).with_position(300.0, 0.0, 150.0),
    ];
    let g = ConflictGraph::from_geometry(nodes).unwrap();
    show("geometry: A,B within range, C isolated", &g);

    // channels: conflict on any shared basic channel; a bonded node
    // transmits faster (tx time divided by width) but blocks more peers
    let nodes = vec![
        Node::new("A", 1e-3, 1e-3, 8000.0).with_channels([1]),
        Node::new("B", 1e-3, 1e-3, 8000.0).with_channels([2]),
        Node::new("C", 1e-3, 1e-3, 8000.0).with_channels([1, 2]),
    ];
    let g = ConflictGraph::from_channels(nodes).unwrap();
    show("channels: C bonds the channels of A and B", &g);
}
