//! Command-line front end.
//!
//! Subcommands:
//! - `analyze`: product-form stationary distribution and per-node
//!   throughput for a scenario or config file, as CSV.
//! - `simulate`: event-driven simulation with confidence intervals and
//!   the empirical state distribution; `--check-insensitivity` runs the
//!   full distribution matrix.
//! - `sweep`: analytical throughput versus backoff mean over a log grid.
//! - `validate`: cross-checks the product form against the
//!   generator-matrix solve and the detailed-balance identity.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 input error, 3 state-space
//! cap exceeded. The cap defaults to 2^20 states and can be overridden
//! with the `CTMN_STATE_CAP` environment variable.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::NetworkConfigFile;
use crate::error::{Error, Result};
use crate::report;
use crate::scenarios::{self, ParamOverrides, ScenarioId};
use crate::sim::{self, DistKind, SimConfig};
use crate::statespace::StateSpace;
use crate::stationary::{self, compute_theta};
use crate::throughput::node_throughput;
use crate::topology::ConflictGraph;
use crate::DEFAULT_STATE_CAP;

#[derive(Parser)]
#[command(name = "ctmn", version, about = "CSMA/CA throughput analysis via continuous-time Markov networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the stationary distribution and per-node throughput
    Analyze(AnalyzeArgs),
    /// Run the event-driven simulator and report empirical results
    Simulate(SimulateArgs),
    /// Sweep the backoff mean and tabulate analytical throughput
    Sweep(SweepArgs),
    /// Cross-check product form, balance solve and detailed balance
    Validate(ValidateArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Built-in scenario: vehicular_pos1, vehicular_pos2, plc_chain, wlan_bonding
    #[arg(long, value_name = "NAME", conflicts_with = "config")]
    scenario: Option<String>,
    /// JSON network description file
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Uniform backoff mean override E[B], seconds
    #[arg(long, value_name = "SECONDS")]
    eb: Option<f64>,
    /// Uniform transmission time override E[T], seconds
    #[arg(long, value_name = "SECONDS")]
    et: Option<f64>,
    /// Uniform packet length override E[L], bits
    #[arg(long, value_name = "BITS")]
    el: Option<f64>,
}

impl InputArgs {
    fn load(&self) -> Result<(ConflictGraph, Vec<(String, String)>)> {
        let mut meta = Vec::new();
        let graph = match (&self.scenario, &self.config) {
            (Some(name), None) => {
                let id: ScenarioId = name.parse()?;
                meta.push(("scenario".to_string(), id.name().to_string()));
                scenarios::build(id, &ParamOverrides::uniform(self.eb, self.et, self.el))?
            }
            (None, Some(path)) => {
                meta.push(("config".to_string(), path.display().to_string()));
                let mut file = NetworkConfigFile::from_path(path)?;
                file.apply_uniform(self.eb, self.et, self.el);
                file.to_graph()?
            }
            _ => {
                return Err(Error::Config(
                    "provide exactly one of --scenario or --config".into(),
                ))
            }
        };
        for (flag, v) in [("eb", self.eb), ("et", self.et), ("el", self.el)] {
            if let Some(v) = v {
                meta.push((flag.to_string(), report::fmt_sig(v)));
            }
        }
        Ok((graph, meta))
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Master RNG seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Warmup seconds discarded before measurement (default 1e3 * max E[T])
    #[arg(long, value_name = "SECONDS")]
    warmup: Option<f64>,
    /// Measured seconds per replication (default 1e5 * max E[T])
    #[arg(long, value_name = "SECONDS")]
    measure: Option<f64>,
    /// Number of replications
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Backoff distribution: exponential, deterministic, uniform
    #[arg(long = "dist-backoff", default_value = "exponential")]
    dist_backoff: String,
    /// Transmission-time distribution: exponential, deterministic, uniform
    #[arg(long = "dist-tx", default_value = "exponential")]
    dist_tx: String,
    /// Run the full distribution matrix and check insensitivity
    #[arg(long)]
    check_insensitivity: bool,
    /// Worker threads for replications (default: all hardware threads)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in scenario to sweep
    #[arg(long, value_name = "NAME")]
    scenario: String,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// First backoff mean of the log-spaced grid (default E[T]/100)
    #[arg(long, value_name = "SECONDS")]
    grid_start: Option<f64>,
    /// Last backoff mean of the grid (default 10 * E[T])
    #[arg(long, value_name = "SECONDS")]
    grid_stop: Option<f64>,
    /// Number of grid points
    #[arg(long, default_value_t = 50)]
    grid_points: usize,
    /// Worker threads for grid points (default: all hardware threads)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Tolerance for product-form vs balance-solve agreement
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Tolerance for the detailed-balance residual
    #[arg(long, default_value_t = 1e-12)]
    db_tol: f64,
    /// Multiply one stationary probability by (1 + FACTOR) before
    /// checking; forces a failure for testing the exit path
    #[arg(long, value_name = "FACTOR", hide = true)]
    perturb_pi: Option<f64>,
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::StateExplosion { .. } => 3,
        Error::NumericalFailure(_) => 1,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Validate(a) => cmd_validate(a),
    }
}

fn state_cap() -> Result<usize> {
    match std::env::var("CTMN_STATE_CAP") {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("CTMN_STATE_CAP must be an integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        Some(j) if j > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        Some(_) => Err(Error::Config("--jobs must be at least 1".into())),
        None => Ok(f()),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32> {
    let (graph, meta) = args.input.load()?;
    let space = StateSpace::enumerate_with_cap(&graph, state_cap()?)?;
    let dist = stationary::product_form(&space, &compute_theta(graph.nodes()))?;
    let tput = node_throughput(&space, &dist, graph.nodes());
    write_output(
        args.output.as_ref(),
        &report::analyze_csv(&meta, &graph, &space, &dist, &tput),
    )?;
    Ok(0)
}

fn cmd_simulate(args: SimulateArgs) -> Result<i32> {
    let (graph, mut meta) = args.input.load()?;
    let space = StateSpace::enumerate_with_cap(&graph, state_cap()?)?;
    let mut config = SimConfig::default_for(&graph, args.seed);
    if let Some(w) = args.warmup {
        config.warmup = w;
    }
    if let Some(m) = args.measure {
        config.measure = m;
    }
    config.replications = args.reps;
    config.backoff_dist = args.dist_backoff.parse::<DistKind>()?;
    config.txtime_dist = args.dist_tx.parse::<DistKind>()?;
    meta.push(("seed".into(), config.seed.to_string()));
    meta.push(("warmup_s".into(), report::fmt_sig(config.warmup)));
    meta.push(("measure_s".into(), report::fmt_sig(config.measure)));
    meta.push(("replications".into(), config.replications.to_string()));

    if args.check_insensitivity {
        let rep = with_jobs(args.jobs, || sim::insensitivity_check(&graph, &space, &config))??;
        write_output(args.output.as_ref(), &report::insensitivity_csv(&meta, &rep))?;
        return Ok(if rep.all_pass() { 0 } else { 1 });
    }
    meta.push(("dist_backoff".into(), config.backoff_dist.name().into()));
    meta.push(("dist_tx".into(), config.txtime_dist.name().into()));
    let result = with_jobs(args.jobs, || sim::simulate(&graph, &space, &config))??;
    write_output(
        args.output.as_ref(),
        &report::simulate_csv(&meta, &graph, &space, &result),
    )?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let id: ScenarioId = args.scenario.parse()?;
    let default_grid = scenarios::default_backoff_grid(id);
    if args.grid_points == 0 {
        return Err(Error::InvalidGrid("need at least one grid point".into()));
    }
    let grid = match (args.grid_start, args.grid_stop) {
        (None, None) if args.grid_points == 50 => default_grid,
        (start, stop) => {
            let start = start.unwrap_or(default_grid[0]);
            let stop = stop.unwrap_or(*default_grid.last().unwrap());
            if !(start > 0.0 && stop >= start) {
                return Err(Error::InvalidGrid(format!(
                    "bad grid bounds [{start}, {stop}]"
                )));
            }
            scenarios::log_spaced(start, stop, args.grid_points)
        }
    };
    let meta = vec![
        ("scenario".to_string(), id.name().to_string()),
        ("grid_points".to_string(), grid.len().to_string()),
    ];
    let table = with_jobs(args.jobs, || scenarios::sweep_backoff(id, &grid))??;
    write_output(args.output.as_ref(), &report::sweep_csv(&meta, &table))?;
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<i32> {
    let (graph, _) = args.input.load()?;
    let space = StateSpace::enumerate_with_cap(&graph, state_cap()?)?;
    let theta = compute_theta(graph.nodes());
    let mut pf = stationary::product_form(&space, &theta)?;
    if let Some(f) = args.perturb_pi {
        let last = pf.pi.len() - 1;
        pf.pi[last] *= 1.0 + f;
    }
    let oracle = stationary::balance_solve(&space, graph.nodes())?;
    let inf_err = stationary::max_abs_difference(&pf, &oracle);
    let residual = stationary::check_detailed_balance(&space, &theta, &pf);
    let ok = inf_err < args.tol && residual < args.db_tol;
    println!("states: {}", space.len());
    println!(
        "product_form vs balance_solve inf-norm error: {:e} (tol {:e})",
        inf_err, args.tol
    );
    println!(
        "detailed-balance max relative residual: {:e} (tol {:e})",
        residual, args.db_tol
    );
    println!("result: {}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { 1 })
}
