//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them). The numerical references are computed here from the
//! closed forms by hand-expanded sums, independent of the library's
//! computation path.

use std::collections::BTreeSet;

use ctmn::scenarios::{build, ParamOverrides, ScenarioId};
use ctmn::sim::{self, DistKind, SimConfig};
use ctmn::statespace::StateSpace;
use ctmn::stationary::{
    balance_solve, check_detailed_balance, compute_theta, max_abs_difference, product_form,
};
use ctmn::throughput::node_throughput;
use ctmn::topology::{ConflictGraph, Node};

fn labels(g: &ConflictGraph) -> BTreeSet<String> {
    StateSpace::enumerate(g)
        .unwrap()
        .states()
        .iter()
        .map(|s| s.label(g.nodes()))
        .collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn scenario(id: ScenarioId) -> ConflictGraph {
    build(id, &ParamOverrides::default()).unwrap()
}

/// Scenario with a uniform theta imposed via the backoff mean.
fn scenario_at_theta(id: ScenarioId, theta: f64) -> ConflictGraph {
    let et = scenario(id).node(0).tx_time_mean;
    // bonded nodes divide E[T] by the width; keep theta uniform by
    // scaling each node's backoff individually
    let ov = ParamOverrides {
        eb: Some(et / theta),
        ..Default::default()
    };
    let mut g = build(id, &ov).unwrap();
    let widths: Vec<usize> = g.nodes().iter().map(|n| n.channel_width()).collect();
    if widths.iter().any(|w| *w != 1) {
        let mut per_node = ParamOverrides::default();
        for (n, w) in g.nodes().iter().zip(&widths) {
            per_node.per_node.insert(
                n.id.clone(),
                ctmn::scenarios::NodeParams {
                    eb: Some(n.tx_time_mean / (*w as f64 * theta)),
                    ..Default::default()
                },
            );
        }
        g = build(id, &per_node).unwrap();
    }
    g
}

fn verdict(criterion: &str, pass: bool) {
    println!(
        "acceptance {criterion}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion failed: {criterion}");
}

#[test]
fn criterion_1_state_spaces_match_reference_figures() {
    let mut ok = true;
    ok &= labels(&scenario(ScenarioId::VehicularPos1)) == set(&["-", "A", "B", "D", "BD"]);
    ok &= labels(&scenario(ScenarioId::VehicularPos2)) == set(&["-", "A", "B", "D"]);
    ok &= labels(&scenario(ScenarioId::PlcChain))
        == set(&["-", "A", "B", "C", "D", "E", "AD", "AE", "BE"]);
    ok &= labels(&scenario(ScenarioId::WlanBonding))
        == set(&[
            "-", "A", "B", "C", "D", "E", "AB", "AC", "BC", "BD", "CD", "ABC", "BCD",
        ]);
    verdict("1 state spaces", ok);
}

#[test]
fn criterion_2_oracle_equivalence() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    let mut worst: f64 = 0.0;
    for id in ScenarioId::ALL {
        let g = scenario(id);
        let sp = StateSpace::enumerate(&g).unwrap();
        let pf = product_form(&sp, &compute_theta(g.nodes())).unwrap();
        let bs = balance_solve(&sp, g.nodes()).unwrap();
        worst = worst.max(max_abs_difference(&pf, &bs));
    }
    let mut rng = StdRng::seed_from_u64(20240817);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10usize);
        let nodes: Vec<Node> = (0..n)
            .map(|i| {
                let theta = 10f64.powf(rng.gen_range(-2.0..=2.0));
                Node::new(&format!("n{i}"), 1e-3 / theta, 1e-3, 8000.0)
            })
            .collect();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    pairs.push((format!("n{i}"), format!("n{j}")));
                }
            }
        }
        let g = ConflictGraph::from_pairs(nodes, &pairs).unwrap();
        let sp = StateSpace::enumerate(&g).unwrap();
        let pf = product_form(&sp, &compute_theta(g.nodes())).unwrap();
        let bs = balance_solve(&sp, g.nodes()).unwrap();
        worst = worst.max(max_abs_difference(&pf, &bs));
    }
    println!("  worst inf-norm disagreement: {worst:e}");
    verdict("2 oracle equivalence", worst < 1e-10);
}

#[test]
fn criterion_3_detailed_balance() {
    let mut worst: f64 = 0.0;
    for id in ScenarioId::ALL {
        let g = scenario(id);
        let sp = StateSpace::enumerate(&g).unwrap();
        let theta = compute_theta(g.nodes());
        let pf = product_form(&sp, &theta).unwrap();
        worst = worst.max(check_detailed_balance(&sp, &theta, &pf));
    }
    println!("  worst relative residual: {worst:e}");
    verdict("3 detailed balance", worst < 1e-12);
}

#[test]
fn criterion_4_channel_bonding_reference_numbers() {
    let g = scenario(ScenarioId::WlanBonding);
    let sp = StateSpace::enumerate(&g).unwrap();
    let dist = product_form(&sp, &compute_theta(g.nodes())).unwrap();
    let report = node_throughput(&sp, &dist, g.nodes());
    let x = |id: &str| report.per_node.iter().find(|n| n.id == id).unwrap().throughput;

    // hand evaluation from the closed forms: theta = E[T]/(c E[B]) with
    // E[T]=0.1 ms, E[B]=50 us, widths (1,1,2,4,8) -> (2, 2, 1, 0.5, 0.25)
    let (ta, tb, tc, td, te): (f64, f64, f64, f64, f64) = (2.0, 2.0, 1.0, 0.5, 0.25);
    let phi = 1.0
        + ta + tb + tc + td + te
        + ta * tb + ta * tc + tb * tc + tb * td + tc * td
        + ta * tb * tc + tb * tc * td;
    // bit rate per basic channel: E[L]/E[T] = 12000 bits / 0.1 ms
    let rate = 12000.0 / 1e-4;
    let xa = (ta + ta * tb + ta * tc + ta * tb * tc) / phi * rate;
    let xb = (tb + ta * tb + tb * tc + tb * td + ta * tb * tc + tb * tc * td) / phi * rate;
    let xc = (tc + ta * tc + tb * tc + tc * td + ta * tb * tc + tb * tc * td) / phi * rate * 2.0;
    let xd = (td + tb * td + tc * td + tb * tc * td) / phi * rate * 4.0;
    let xe = te / phi * rate * 8.0;

    let mut ok = (dist.phi - 21.25).abs() < 1e-12;
    ok &= (phi - 21.25).abs() < 1e-12;
    for (id, expect) in [("A", xa), ("B", xb), ("C", xc), ("D", xd), ("E", xe)] {
        let got = x(id);
        println!("  x_{id} = {:.4} Mb/s (reference {:.4})", got / 1e6, expect / 1e6);
        ok &= (got - expect).abs() / expect < 1e-9;
    }
    // performance anomaly: the 4-channel WLAN gains nothing over the 1-channel one
    ok &= (x("A") - x("D")).abs() / x("A") < 1e-12;
    ok &= x("C") > x("B") && x("B") > x("A");
    ok &= ["A", "B", "C", "D"].iter().all(|id| x(id) > x("E"));
    verdict("4 channel-bonding numbers", ok);
}

#[test]
fn criterion_5_scenario_symmetries_over_theta_grid() {
    let grid = ctmn::scenarios::log_spaced(0.05, 20.0, 20);
    let mut ok = true;
    for &theta in &grid {
        let analyze = |id: ScenarioId| {
            let g = scenario_at_theta(id, theta);
            let sp = StateSpace::enumerate(&g).unwrap();
            let d = product_form(&sp, &compute_theta(g.nodes())).unwrap();
            node_throughput(&sp, &d, g.nodes())
        };
        let r = analyze(ScenarioId::PlcChain);
        let x = |id: &str| r.per_node.iter().find(|n| n.id == id).unwrap().throughput;
        ok &= (x("A") - x("E")).abs() / x("A") < 1e-12;
        ok &= (x("B") - x("D")).abs() / x("B") < 1e-12;
        ok &= r.per_node.iter().all(|n| n.throughput >= x("C") * (1.0 - 1e-12));

        let r = analyze(ScenarioId::VehicularPos1);
        let x = |id: &str| r.per_node.iter().find(|n| n.id == id).unwrap().throughput;
        ok &= (x("B") - x("D")).abs() / x("B") < 1e-12;
        ok &= x("B") > x("A");

        let r = analyze(ScenarioId::VehicularPos2);
        let xa = r.per_node[0].throughput;
        ok &= r
            .per_node
            .iter()
            .all(|n| (n.throughput - xa).abs() / xa < 1e-12);
    }
    verdict("5 scenario symmetries", ok);
}

#[test]
fn criterion_6_starvation_limit() {
    let g = scenario_at_theta(ScenarioId::VehicularPos1, 1e3);
    let sp = StateSpace::enumerate(&g).unwrap();
    let d = product_form(&sp, &compute_theta(g.nodes())).unwrap();
    let r = node_throughput(&sp, &d, g.nodes());
    let airtime_a = r.per_node.iter().find(|n| n.id == "A").unwrap().airtime;
    println!("  airtime_A at theta=1e3: {airtime_a:e}");
    verdict("6 starvation limit", airtime_a < 0.01);
}

#[test]
fn criterion_7_simulation_agreement() {
    let mut ok = true;
    for id in ScenarioId::ALL {
        let g = scenario(id);
        let sp = StateSpace::enumerate(&g).unwrap();
        let d = product_form(&sp, &compute_theta(g.nodes())).unwrap();
        let analytic = node_throughput(&sp, &d, g.nodes());
        let config = SimConfig::default_for(&g, 7);
        let r = sim::simulate(&g, &sp, &config).unwrap();
        let mut worst_state: f64 = 0.0;
        for (k, pi_hat) in r.state_fraction.iter().enumerate() {
            worst_state = worst_state.max((pi_hat - d.pi[k]).abs());
        }
        let mut worst_airtime: f64 = 0.0;
        for (ns, na) in r.per_node.iter().zip(&analytic.per_node) {
            worst_airtime = worst_airtime.max((ns.airtime.mean - na.airtime).abs() / na.airtime);
        }
        println!(
            "  {id}: max |pi_hat - pi| = {worst_state:.2e}, max airtime rel err = {worst_airtime:.2e}"
        );
        ok &= worst_state < 0.01 && worst_airtime < 0.02;
    }
    verdict("7 simulation agreement", ok);
}

#[test]
fn criterion_8_insensitivity() {
    // Deterministic and uniform backoff/transmission-time distributions
    // with the reference means must reproduce the exponential-case
    // airtimes. The one exclusion is both distributions deterministic on
    // a non-clique topology: with all means equal the whole system is
    // deterministic and phase-locks into a periodic orbit (node A of the
    // vehicular network settles at airtime 0.5 instead of 0.2), so there
    // is no stationary randomness left for insensitivity to speak about.
    // The fully deterministic case is still checked on the clique, where
    // the lock-step schedule happens to time-average to the product form.
    let mut ok = true;
    let compare = |id: ScenarioId,
                   g: &ConflictGraph,
                   sp: &StateSpace,
                   exp: &sim::SimResult,
                   b: DistKind,
                   t: DistKind|
     -> bool {
        let config = SimConfig {
            backoff_dist: b,
            txtime_dist: t,
            ..exp.config
        };
        let alt = sim::simulate(g, sp, &config).unwrap();
        let mut pass = true;
        for (a, e) in alt.per_node.iter().zip(&exp.per_node) {
            let rel = (a.airtime.mean - e.airtime.mean).abs() / e.airtime.mean;
            let overlap = (a.airtime.mean - e.airtime.mean).abs()
                <= a.airtime.half_width + e.airtime.half_width;
            if rel >= 0.02 || !overlap {
                println!("  {id} node {} {b:?}/{t:?}: rel {rel:.3e}, overlap {overlap}", a.id);
                pass = false;
            }
        }
        pass
    };
    for id in ScenarioId::ALL {
        let g = scenario(id);
        let sp = StateSpace::enumerate(&g).unwrap();
        let base = SimConfig::default_for(&g, 8);
        let exp = sim::simulate(&g, &sp, &base).unwrap();
        for b in DistKind::ALL {
            for t in DistKind::ALL {
                if (b, t) == (DistKind::Exponential, DistKind::Exponential)
                    || (b, t) == (DistKind::Deterministic, DistKind::Deterministic)
                {
                    continue;
                }
                ok &= compare(id, &g, &sp, &exp, b, t);
            }
        }
    }
    // fully deterministic timing on the full clique
    let g = scenario(ScenarioId::VehicularPos2);
    let sp = StateSpace::enumerate(&g).unwrap();
    let exp = sim::simulate(&g, &sp, &SimConfig::default_for(&g, 8)).unwrap();
    ok &= compare(
        ScenarioId::VehicularPos2,
        &g,
        &sp,
        &exp,
        DistKind::Deterministic,
        DistKind::Deterministic,
    );
    verdict("8 insensitivity", ok);
}

#[test]
fn criterion_9_deterministic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let run_twice = |args: &[&str]| -> (Vec<u8>, Vec<u8>) {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("out{i}.csv"));
            let mut full: Vec<String> = vec!["ctmn".into()];
            full.extend(args.iter().map(|s| s.to_string()));
            full.push("--output".into());
            full.push(path.display().to_string());
            assert_eq!(ctmn::cli::run(full), 0);
            outputs.push(std::fs::read(&path).unwrap());
        }
        (outputs.remove(0), outputs.remove(0))
    };
    let mut ok = true;
    let (a, b) = run_twice(&["analyze", "--scenario", "wlan_bonding"]);
    ok &= a == b;
    let (a, b) = run_twice(&[
        "simulate",
        "--scenario",
        "wlan_bonding",
        "--seed",
        "1",
        "--reps",
        "4",
        "--measure",
        "2.0",
    ]);
    ok &= a == b;
    let (a, b) = run_twice(&["sweep", "--scenario", "plc_chain"]);
    ok &= a == b;
    verdict("9 deterministic outputs", ok);
}
