use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::bound_chain;
use crate::error::Result;
use crate::harness::run::{closed_form_value, evaluate, mix_seed, ChainProvider, EXACT_RTOL, SOUNDNESS_CI};
use crate::harness::spec::{ExperimentSpec, Method, Point};
use crate::sim::SimConfig;
use crate::topology::Rates;

/// Required fraction of seeds whose simulated value lands within the CI
/// band of the exact value.
pub const AGREEMENT_FRACTION: f64 = 0.95;

/// One inequality checked at one sweep point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub experiment: String,
    pub family: String,
    pub params: String,
    /// `exact<=chain`, `simulated<=chain`, `chain<=slack*closed_form`, or
    /// `simulated~exact`.
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub checks: Vec<Check>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Checks the ordering exact ≤ chain, simulated ≤ chain (within the CI
/// band), chain ≤ slack × closed form, and simulated ≈ exact over
/// `crosscheck_seeds` seeds, at every point where the methods involved
/// were requested.
pub fn crosscheck(spec: &ExperimentSpec) -> Result<CrosscheckReport> {
    crosscheck_with(spec, &bound_chain)
}

/// [`crosscheck`] with a custom chain provider.
pub fn crosscheck_with(spec: &ExperimentSpec, chain: ChainProvider<'_>) -> Result<CrosscheckReport> {
    spec.validate()?;
    let rates = spec.rates()?;
    let checks = spec
        .points()?
        .par_iter()
        .enumerate()
        .map(|(i, p)| point_checks(spec, i, p, rates, chain))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(CrosscheckReport { checks })
}

fn point_checks(
    spec: &ExperimentSpec,
    index: usize,
    point: &Point,
    rates: Rates,
    chain: ChainProvider<'_>,
) -> Vec<Check> {
    let wants = |m| spec.methods.contains(&m);
    let mut checks = Vec::new();
    let mut push = |name: &str, lhs: f64, rhs: f64, pass: bool, error: Option<String>| {
        checks.push(Check {
            experiment: spec.name.clone(),
            family: point.family.name().to_string(),
            params: point.params(),
            check: name.to_string(),
            lhs,
            rhs,
            pass,
            error,
        })
    };
    let sim_for = |seed_index: u64| SimConfig {
        seed: mix_seed(spec.sim.seed, (index as u64) << 20 | seed_index),
        ..spec.sim.clone()
    };

    let get = |m: Method, sim: &SimConfig| evaluate(point, m, rates, sim, chain);
    let base_sim = sim_for(0);
    let exact = wants(Method::Exact).then(|| get(Method::Exact, &base_sim));
    let bound = wants(Method::Chain).then(|| get(Method::Chain, &base_sim));
    let closed = wants(Method::ClosedForm).then(|| closed_form_value(point, rates));
    let simulated = wants(Method::Simulate).then(|| get(Method::Simulate, &base_sim));

    let failed = |name: &str, e: &crate::error::Error| (name.to_string(), e.to_string());
    let mut errors = Vec::new();
    let exact = match exact {
        Some(Err(e)) => {
            errors.push(failed("exact", &e));
            None
        }
        Some(Ok(e)) => Some(e.value),
        None => None,
    };
    let bound = match bound {
        Some(Err(e)) => {
            errors.push(failed("chain", &e));
            None
        }
        Some(Ok(b)) => Some(b.value),
        None => None,
    };
    let closed = match closed {
        Some(Err(e)) => {
            errors.push(failed("closed_form", &e));
            None
        }
        Some(Ok(c)) => Some(c),
        None => None,
    };
    let simulated = match simulated {
        Some(Err(e)) => {
            errors.push(failed("simulate", &e));
            None
        }
        Some(Ok(s)) => Some((s.value, s.ci95.unwrap_or(0.0))),
        None => None,
    };
    for (name, e) in errors {
        push(name.as_str(), f64::NAN, f64::NAN, false, Some(e));
    }

    if let (Some(e), Some(b)) = (exact, bound) {
        push("exact<=chain", e, b, e <= b * (1.0 + EXACT_RTOL), None);
    }
    if let (Some((v, ci)), Some(b)) = (simulated, bound) {
        push(
            "simulated<=chain",
            v - SOUNDNESS_CI * ci,
            b,
            v - SOUNDNESS_CI * ci <= b,
            None,
        );
    }
    if let (Some(b), Some(c)) = (bound, closed) {
        let rhs = spec.closed_form_slack * c;
        push("chain<=slack*closed_form", b, rhs, b <= rhs, None);
    }
    if let (Some(e), Some(_)) = (exact, simulated) {
        let seeds = spec.crosscheck_seeds.max(1);
        let mut within = 0usize;
        let mut error = None;
        for s in 0..seeds as u64 {
            match get(Method::Simulate, &sim_for(s)) {
                Ok(r) if (r.value - e).abs() <= SOUNDNESS_CI * r.ci95.unwrap_or(0.0) => within += 1,
                Ok(_) => {}
                Err(err) => error = Some(err.to_string()),
            }
        }
        let need = (AGREEMENT_FRACTION * seeds as f64).ceil();
        push(
            "simulated~exact",
            within as f64,
            need,
            error.is_none() && within as f64 >= need,
            error,
        );
    }
    checks
}
