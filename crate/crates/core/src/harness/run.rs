use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bound_chain, fixed_d_ring_closed_form, fully_connected_closed_form, grid_asymptotic, grid_closed_form,
    hypercube_closed_form, ring_alpha_closed_form, ring_closed_form, BoundChain,
};
use crate::error::{Error, Result};
use crate::exact::exact_single_node;
use crate::harness::spec::{ExperimentSpec, Method, Point};
use crate::sim::{simulate, SimConfig};
use crate::topology::{Family, GraphBuilder, Rates};

/// Version tag of the result CSV layout.
pub const CSV_SCHEMA: u32 = 1;

/// Tolerance below an exact value that a bound may fall before it is
/// flagged unsound.
pub const EXACT_RTOL: f64 = 1e-9;

/// Width of the simulated confidence band used in soundness checks, in
/// 95% half-widths.
pub const SOUNDNESS_CI: f64 = 3.0;

/// Produces the chain for a point; swappable for negative controls.
pub type ChainProvider<'a> = &'a (dyn Fn(Family, Rates) -> Result<BoundChain> + Sync);

/// One output line: a sweep point evaluated by one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub family: String,
    pub params: String,
    pub n: usize,
    pub method: String,
    pub value: Option<f64>,
    pub ci95: Option<f64>,
    pub seed: Option<u64>,
    pub horizon: Option<f64>,
    pub replications: Option<usize>,
    pub conjecture: bool,
    /// Bound rows only: whether the bound holds against the simulated (or
    /// exact) value at the same point.
    pub sound: Option<bool>,
    pub error: Option<String>,
}

/// Stateless 64-bit mixer used to derive per-point seeds.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Closed form of a point, if the family has one.
pub fn closed_form_value(point: &Point, rates: Rates) -> Result<f64> {
    match point.family {
        Family::Ring { n, f } => ring_closed_form(n as f64, f as f64, rates),
        Family::Grid { m, k } => grid_closed_form(m.max(k), m.min(k), rates),
        Family::UnitHypercube { m } => hypercube_closed_form(m, rates),
        Family::TorusHypercube { m, d: 1 } => ring_closed_form(m as f64, 1.0, rates),
        Family::TorusHypercube { m, d: 2 } => grid_closed_form(m, m, rates),
        Family::FullyConnected { n } => fully_connected_closed_form(n as f64, rates),
        other => Err(Error::param(format!("no closed form for {other}"))),
    }
}

/// Leading-order form of a point, if the family has one.
pub fn asymptotic_value(point: &Point, rates: Rates) -> Result<f64> {
    match (point.family, point.alpha) {
        (Family::Ring { n, .. }, Some(alpha)) => ring_alpha_closed_form(n as f64, alpha, rates),
        (Family::Ring { n, f }, None) => fixed_d_ring_closed_form(n as f64, f as f64, rates),
        (Family::Grid { m, k }, _) => grid_asymptotic((m * k) as f64, rates),
        (Family::TorusHypercube { m, d: 2 }, _) => grid_asymptotic((m * m) as f64, rates),
        (Family::FullyConnected { n }, _) => fully_connected_closed_form(n as f64, rates),
        (other, _) => Err(Error::param(format!("no asymptotic form for {other}"))),
    }
}

pub(crate) struct Evaluation {
    pub value: f64,
    pub ci95: Option<f64>,
    pub seed: Option<u64>,
    pub horizon: Option<f64>,
    pub replications: Option<usize>,
    pub conjecture: bool,
}

impl Evaluation {
    fn plain(value: f64, conjecture: bool) -> Self {
        Evaluation {
            value,
            ci95: None,
            seed: None,
            horizon: None,
            replications: None,
            conjecture,
        }
    }
}

pub(crate) fn evaluate(
    point: &Point,
    method: Method,
    rates: Rates,
    sim: &SimConfig,
    chain: ChainProvider<'_>,
) -> Result<Evaluation> {
    let build = || GraphBuilder::new().rates(rates).build(point.family);
    match method {
        Method::Exact => Ok(Evaluation::plain(exact_single_node(&build()?)?.value, false)),
        Method::Simulate => {
            let report = simulate(&build()?, sim)?;
            Ok(Evaluation {
                value: report.result.value,
                ci95: report.result.ci_halfwidth,
                seed: Some(sim.seed),
                horizon: Some(report.horizon),
                replications: Some(sim.replications),
                conjecture: false,
            })
        }
        Method::Chain => {
            let c = chain(point.family, rates)?;
            Ok(Evaluation::plain(c.v1, c.conjecture))
        }
        Method::ClosedForm => Ok(Evaluation::plain(closed_form_value(point, rates)?, false)),
        Method::Asymptotic => Ok(Evaluation::plain(asymptotic_value(point, rates)?, false)),
    }
}

/// Whether `bound` holds against a simulated value (within the CI band)
/// or an exact value.
pub fn bound_is_sound(bound: f64, simulated: Option<(f64, Option<f64>)>, exact: Option<f64>) -> Option<bool> {
    if let Some(e) = exact {
        return Some(bound >= e * (1.0 - EXACT_RTOL));
    }
    simulated.map(|(v, ci)| bound >= v - SOUNDNESS_CI * ci.unwrap_or(0.0))
}

fn point_rows(spec: &ExperimentSpec, index: usize, point: &Point, rates: Rates, chain: ChainProvider<'_>) -> Vec<Row> {
    let sim = SimConfig {
        seed: mix_seed(spec.sim.seed, index as u64),
        ..spec.sim.clone()
    };
    let mut methods = spec.methods.clone();
    methods.sort();
    methods.dedup();
    let mut rows: Vec<Row> = methods
        .iter()
        .map(|&method| {
            let mut row = Row {
                experiment: spec.name.clone(),
                family: point.family.name().to_string(),
                params: point.params(),
                n: point.family.node_count(),
                method: method.name().to_string(),
                value: None,
                ci95: None,
                seed: None,
                horizon: None,
                replications: None,
                conjecture: false,
                sound: None,
                error: None,
            };
            match evaluate(point, method, rates, &sim, chain) {
                Ok(e) => {
                    row.value = Some(e.value);
                    row.ci95 = e.ci95;
                    row.seed = e.seed;
                    row.horizon = e.horizon;
                    row.replications = e.replications;
                    row.conjecture = e.conjecture;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();

    let find = |rows: &[Row], m: Method| {
        rows.iter()
            .find(|r| r.method == m.name())
            .and_then(|r| r.value.map(|v| (v, r.ci95)))
    };
    let simulated = find(&rows, Method::Simulate);
    let exact = find(&rows, Method::Exact).map(|e| e.0);
    // Only the grid's leading-order form is itself a bound.
    let asymptotic_bounds = matches!(point.family, Family::Grid { .. } | Family::TorusHypercube { d: 2, .. });
    for (row, method) in rows.iter_mut().zip(&methods) {
        if method.is_bound() && (*method != Method::Asymptotic || asymptotic_bounds) {
            if let Some(v) = row.value {
                row.sound = bound_is_sound(v, simulated, exact);
            }
        }
    }
    rows
}

fn method_rank(name: &str) -> usize {
    [
        Method::Exact,
        Method::Simulate,
        Method::Chain,
        Method::ClosedForm,
        Method::Asymptotic,
    ]
    .iter()
    .position(|m| m.name() == name)
    .unwrap_or(usize::MAX)
}

/// Canonical row order: experiment, family, `n`, params, method.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        (&a.experiment, &a.family, a.n, &a.params, method_rank(&a.method)).cmp(&(
            &b.experiment,
            &b.family,
            b.n,
            &b.params,
            method_rank(&b.method),
        ))
    });
}

/// Evaluates every sweep point with every method. Failures become `error`
/// cells; the run itself only fails on an invalid spec.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<Row>> {
    run_with(spec, &bound_chain)
}

/// [`run`] with a custom chain provider.
pub fn run_with(spec: &ExperimentSpec, chain: ChainProvider<'_>) -> Result<Vec<Row>> {
    spec.validate()?;
    let rates = spec.rates()?;
    let points = spec.points()?;
    let mut rows: Vec<Row> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| point_rows(spec, i, p, rates, chain))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    sort_rows(&mut rows);
    Ok(rows)
}

/// Writes rows as CSV, preceded by a `# schema=` comment line and, unless
/// `quiet`, a `# generated_unix=` timestamp line.
pub fn write_csv<W: Write>(mut out: W, rows: &[Row], quiet: bool) -> Result<()> {
    writeln!(out, "# schema={CSV_SCHEMA}")?;
    if !quiet {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(out, "# generated_unix={secs}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads rows back, skipping `#` comment lines.
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<Row>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    rdr.deserialize::<Row>().map(|r| Ok(r?)).collect()
}
