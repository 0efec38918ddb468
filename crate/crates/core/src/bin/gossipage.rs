use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gossipage::bounds::bound_chain;
use gossipage::exact::{exact_all_connected, ExactSolver};
use gossipage::harness::{self, closed_form_value, ExperimentSpec, Point};
use gossipage::sim::{simulate, SimConfig};
use gossipage::subset::BoundForm;
use gossipage::{Error, NodeSet, TopologyDescriptor};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_SOUNDNESS: u8 = 3;

#[derive(Parser)]
#[command(name = "gossipage", version, about = "Version age of push-gossip networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON file, or inline JSON starting with `{` or `[`.
    #[arg(long)]
    config: String,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Omit the timestamp line and progress messages.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Topology queries.
    Topology {
        #[command(subcommand)]
        action: TopologyAction,
    },
    /// Exact single-node age, optionally every connected set's age.
    Exact {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        anchor: usize,
        /// Also write ages of all connected sets up to this size.
        #[arg(long)]
        all_sets: Option<usize>,
    },
    /// Monte Carlo estimate of the single-node age.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        warmup: Option<f64>,
        #[arg(long, default_value_t = 8)]
        reps: usize,
    },
    /// Recursive chain and/or closed-form upper bound.
    Bound {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with_all = ["closed_form", "both"])]
        chain: bool,
        #[arg(long, conflicts_with = "both")]
        closed_form: bool,
        #[arg(long)]
        both: bool,
    },
    /// Checks incoming-edge formulas against exhaustive minima.
    VerifyExtremal {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        j_min: usize,
        #[arg(long)]
        j_max: usize,
        /// Check the relaxed formulas instead of the tight ones.
        #[arg(long)]
        relaxed: bool,
    },
    /// Runs experiment specs and writes the result CSV.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Checks exact/simulated <= chain <= slack * closed form.
    Crosscheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum TopologyAction {
    /// Node count, degree histogram and per-node rate sums.
    Inspect {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Validation(Error),
    Soundness(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Validation(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn read_config(config: &str) -> Result<String, Error> {
    let trimmed = config.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(config.to_string())
    } else {
        Ok(std::fs::read_to_string(config)?)
    }
}

fn descriptor(common: &Common) -> Result<TopologyDescriptor, Error> {
    Ok(serde_json::from_str(&read_config(&common.config)?)?)
}

fn output(common: &Common) -> io::Result<Box<dyn Write>> {
    Ok(match &common.out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn topology_inspect(common: &Common) -> Outcome {
    let g = descriptor(common)?.build()?;
    let mut out = output(common)?;
    writeln!(out, "family: {}", g.family())?;
    writeln!(out, "n: {}", g.n())?;
    writeln!(out, "symmetric: {}", g.is_symmetric())?;
    writeln!(out, "connected: {}", g.is_connected())?;
    writeln!(out, "degree histogram:")?;
    for (deg, count) in g.degree_histogram() {
        writeln!(out, "  {deg}: {count}")?;
    }
    let sums: Vec<f64> = (0..g.n()).map(|i| g.out_rate(i)).collect();
    let lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    writeln!(
        out,
        "per-node rate sum: min {lo} max {hi} (lambda {})",
        g.rates().gossip
    )?;
    Ok(())
}

fn exact(common: &Common, anchor: usize, all_sets: Option<usize>) -> Outcome {
    let g = descriptor(common)?.build()?;
    if anchor >= g.n() {
        return Err(Error::InvalidParameter(format!("anchor {anchor} out of range")).into());
    }
    let v = ExactSolver::new(&g)?.age(&NodeSet::singleton(g.n(), anchor))?;
    match all_sets {
        None => {
            let mut out = output(common)?;
            writeln!(out, "{}", v.value)?;
        }
        Some(max) => {
            if !common.quiet {
                eprintln!("v1 = {}", v.value);
            }
            let mut w = csv::Writer::from_writer(output(common)?);
            w.write_record(["set", "size", "age"])?;
            for (s, age) in exact_all_connected(&g, max)? {
                w.write_record([s.to_list_string(), s.len().to_string(), age.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn simulate_cmd(common: &Common, horizon: Option<f64>, warmup: Option<f64>, reps: usize) -> Outcome {
    let d = descriptor(common)?;
    let g = d.build()?;
    let cfg = SimConfig {
        horizon,
        warmup,
        replications: reps,
        seed: common.seed.unwrap_or(0),
        confidence_interval: reps > 1,
        ..SimConfig::default()
    };
    let r = simulate(&g, &cfg)?;
    let mut w = csv::Writer::from_writer(output(common)?);
    w.write_record(["family", "params", "n", "mean", "ci95", "events", "seed"])?;
    w.write_record([
        d.family.name().to_string(),
        d.family.params(),
        g.n().to_string(),
        r.result.value.to_string(),
        r.result.ci_halfwidth.map(|c| c.to_string()).unwrap_or_default(),
        r.events.total().to_string(),
        cfg.seed.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

fn bound(common: &Common, chain: bool, closed: bool) -> Outcome {
    let d = descriptor(common)?;
    let rates = d.rates()?;
    let (want_chain, want_closed) = match (chain, closed) {
        (false, false) => (true, true),
        other => other,
    };
    let mut conjecture = false;
    let v_chain = if want_chain {
        let c = bound_chain(d.family, rates)?;
        conjecture = c.conjecture;
        Some(c.v1)
    } else {
        None
    };
    let point = Point {
        family: d.family,
        alpha: None,
    };
    let v_closed = if want_closed {
        Some(closed_form_value(&point, rates)?)
    } else {
        None
    };
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(output(common)?);
    w.write_record(["family", "params", "n", "v1_chain", "v1_closed", "conjecture"])?;
    w.write_record([
        d.family.name().to_string(),
        d.family.params(),
        d.family.node_count().to_string(),
        fmt(v_chain),
        fmt(v_closed),
        conjecture.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

fn verify_extremal(common: &Common, j_min: usize, j_max: usize, relaxed: bool) -> Outcome {
    let g = descriptor(common)?.build()?;
    let form = if relaxed { BoundForm::Relaxed } else { BoundForm::Tight };
    let rows = harness::verify_extremal(&g, j_min, j_max, form)?;
    let mut w = csv::Writer::from_writer(output(common)?);
    w.write_record([
        "family",
        "params",
        "j",
        "formula_bound",
        "bruteforce_min",
        "witness",
        "conjecture",
    ])?;
    for r in &rows {
        w.write_record([
            r.family.clone(),
            r.params.clone(),
            r.j.to_string(),
            r.formula_bound.to_string(),
            r.bruteforce_min.to_string(),
            r.witness.clone(),
            r.conjecture.to_string(),
        ])?;
    }
    w.flush()?;
    let bad: Vec<usize> = rows.iter().filter(|r| !r.holds()).map(|r| r.j).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Soundness(format!(
            "formula exceeds the exhaustive minimum at j = {bad:?}"
        )))
    }
}

fn specs(common: &Common) -> Result<Vec<ExperimentSpec>, Error> {
    let mut specs = harness::parse_specs(&read_config(&common.config)?)?;
    if let Some(seed) = common.seed {
        for s in &mut specs {
            s.sim.seed = seed;
        }
    }
    Ok(specs)
}

fn run(common: &Common) -> Outcome {
    let mut rows = Vec::new();
    for spec in specs(common)? {
        if !common.quiet {
            eprintln!("running {}", spec.name);
        }
        rows.extend(harness::run(&spec)?);
    }
    harness::sort_rows(&mut rows);
    harness::write_csv(output(common)?, &rows, common.quiet)?;
    let unsound = rows.iter().filter(|r| r.sound == Some(false)).count();
    if unsound > 0 {
        return Err(Failure::Soundness(format!(
            "{unsound} bound rows are below the reference value"
        )));
    }
    Ok(())
}

fn crosscheck(common: &Common) -> Outcome {
    let mut failures = 0;
    let mut w = csv::Writer::from_writer(output(common)?);
    w.write_record(["experiment", "family", "params", "check", "lhs", "rhs", "pass", "error"])?;
    for spec in specs(common)? {
        let report = harness::crosscheck(&spec)?;
        for c in &report.checks {
            w.write_record([
                c.experiment.clone(),
                c.family.clone(),
                c.params.clone(),
                c.check.clone(),
                c.lhs.to_string(),
                c.rhs.to_string(),
                c.pass.to_string(),
                c.error.clone().unwrap_or_default(),
            ])?;
        }
        failures += report.failures().count();
    }
    w.flush()?;
    if failures > 0 {
        return Err(Failure::Soundness(format!("{failures} checks failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Topology {
            action: TopologyAction::Inspect { common },
        } => topology_inspect(common),
        Command::Exact {
            common,
            anchor,
            all_sets,
        } => exact(common, *anchor, *all_sets),
        Command::Simulate {
            common,
            horizon,
            warmup,
            reps,
        } => simulate_cmd(common, *horizon, *warmup, *reps),
        Command::Bound {
            common,
            chain,
            closed_form,
            both,
        } => bound(common, *chain || *both, *closed_form || *both),
        Command::VerifyExtremal {
            common,
            j_min,
            j_max,
            relaxed,
        } => verify_extremal(common, *j_min, *j_max, *relaxed),
        Command::Run { common } => run(common),
        Command::Crosscheck { common } => crosscheck(common),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VALIDATION)
        }
        Err(Failure::Soundness(msg)) => {
            eprintln!("soundness violation: {msg}");
            ExitCode::from(EXIT_SOUNDNESS)
        }
    }
}
