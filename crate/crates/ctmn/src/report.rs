//! Deterministic CSV and text rendering.
//!
//! Output files carry `#`-prefixed metadata lines (tool version,
//! parameters, seed) followed by plain CSV sections, so they are both
//! self-describing and directly plottable. All numbers use a fixed
//! 6-significant-digit format and all orderings are canonical, making
//! the output byte-stable across runs.

use std::fmt::Write;

use crate::sim::{InsensitivityReport, SimResult};
use crate::statespace::StateSpace;
use crate::stationary::StationaryDistribution;
use crate::throughput::ThroughputReport;
use crate::topology::ConflictGraph;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Format with 6 significant digits, trimming trailing zeros; falls back
/// to scientific notation outside [1e-4, 1e6).
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn meta_block(command: &str, meta: &[(String, String)]) -> String {
    let mut out = format!("# ctmn v{VERSION} {command}\n");
    for (k, v) in meta {
        writeln!(out, "# {k}={v}").unwrap();
    }
    out
}

pub fn analyze_csv(
    meta: &[(String, String)],
    graph: &ConflictGraph,
    space: &StateSpace,
    dist: &StationaryDistribution,
    report: &ThroughputReport,
) -> String {
    let mut out = meta_block("analyze", meta);
    writeln!(out, "# phi={}", fmt_sig(dist.phi)).unwrap();
    out.push_str("# section=states\nstate,mask,pi\n");
    for (k, s) in space.states().iter().enumerate() {
        writeln!(
            out,
            "{},{:#x},{}",
            s.label(graph.nodes()),
            s.mask(),
            fmt_sig(dist.pi[k])
        )
        .unwrap();
    }
    out.push_str("# section=nodes\nid,theta,airtime,throughput_mbps\n");
    for n in &report.per_node {
        writeln!(
            out,
            "{},{},{},{}",
            n.id,
            fmt_sig(n.theta),
            fmt_sig(n.airtime),
            fmt_sig(n.throughput / 1e6)
        )
        .unwrap();
    }
    out
}

pub fn simulate_csv(
    meta: &[(String, String)],
    graph: &ConflictGraph,
    space: &StateSpace,
    result: &SimResult,
) -> String {
    let mut out = meta_block("simulate", meta);
    out.push_str(
        "# section=nodes\nid,airtime,airtime_ci95,throughput_mbps,throughput_ci95_mbps\n",
    );
    for n in &result.per_node {
        writeln!(
            out,
            "{},{},{},{},{}",
            n.id,
            fmt_sig(n.airtime.mean),
            fmt_sig(n.airtime.half_width),
            fmt_sig(n.throughput.mean / 1e6),
            fmt_sig(n.throughput.half_width / 1e6)
        )
        .unwrap();
    }
    out.push_str("# section=states\nstate,mask,pi_hat\n");
    for (k, s) in space.states().iter().enumerate() {
        writeln!(
            out,
            "{},{:#x},{}",
            s.label(graph.nodes()),
            s.mask(),
            fmt_sig(result.state_fraction[k])
        )
        .unwrap();
    }
    out
}

pub fn insensitivity_csv(meta: &[(String, String)], report: &InsensitivityReport) -> String {
    let mut out = meta_block("simulate --check-insensitivity", meta);
    out.push_str("# section=insensitivity\nid,max_airtime_discrepancy,ci_overlap,verdict\n");
    for n in &report.per_node {
        writeln!(
            out,
            "{},{},{},{}",
            n.id,
            fmt_sig(n.max_discrepancy),
            n.ci_overlap,
            if n.pass { "PASS" } else { "FAIL" }
        )
        .unwrap();
    }
    out.push_str("# section=combos\nbackoff_dist,txtime_dist");
    for n in &report.per_node {
        write!(out, ",airtime_{}", n.id).unwrap();
    }
    out.push('\n');
    for (b, t, r) in &report.combos {
        write!(out, "{},{}", b.name(), t.name()).unwrap();
        for n in &r.per_node {
            write!(out, ",{}", fmt_sig(n.airtime.mean)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn sweep_csv(meta: &[(String, String)], table: &crate::scenarios::SweepTable) -> String {
    let mut out = meta_block("sweep", meta);
    out.push_str("eb_s");
    for id in &table.node_ids {
        write!(out, ",x_{id}_mbps").unwrap();
    }
    out.push('\n');
    for (eb, row) in &table.rows {
        write!(out, "{}", fmt_sig(*eb)).unwrap();
        for x in row {
            write!(out, ",{}", fmt_sig(x / 1e6)).unwrap();
        }
        out.push('\n');
    }
    out
}
