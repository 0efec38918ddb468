//! Event-driven Monte Carlo simulation of push gossip.
//!
//! All Poisson clocks are superposed into a single exponential clock of
//! rate `λe + λ + Σ_i λ_i`; each event picks its type and endpoints in
//! proportion to the rates. Ages are integrated exactly between events.

mod fit;

pub use fit::{fit_scaling, ScalingFit};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::age::{AgeKind, AgeResult, Provenance};
use crate::error::{Error, Result};
use crate::topology::Graph;

/// Expected source self-updates covered by the default horizon.
pub const DEFAULT_SELF_UPDATES: f64 = 1e5;

/// Default fraction of the horizon discarded as warmup.
pub const DEFAULT_WARMUP_FRACTION: f64 = 0.2;

/// z-score of the reported confidence interval.
pub const CI_Z: f64 = 1.96;

/// What is time-averaged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Mean of `X_i` over all nodes (valid on vertex-transitive graphs).
    #[default]
    AllNodes,
    /// `X` of the anchor node only.
    SingleNode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Simulated time; `None` picks one covering [`DEFAULT_SELF_UPDATES`]
    /// expected source updates.
    pub horizon: Option<f64>,
    /// Discarded prefix; `None` means [`DEFAULT_WARMUP_FRACTION`] of the horizon.
    pub warmup: Option<f64>,
    pub replications: usize,
    pub seed: u64,
    pub estimator: Estimator,
    pub anchor: usize,
    /// Also report each node's time-averaged age.
    pub per_node: bool,
    /// Report a confidence interval; needs at least two replications.
    pub confidence_interval: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            horizon: None,
            warmup: None,
            replications: 8,
            seed: 0,
            estimator: Estimator::AllNodes,
            anchor: 0,
            per_node: false,
            confidence_interval: true,
        }
    }
}

impl SimConfig {
    pub fn with_horizon(horizon: f64, replications: usize, seed: u64) -> Self {
        SimConfig {
            horizon: Some(horizon),
            replications,
            seed,
            ..SimConfig::default()
        }
    }

    /// `(horizon, warmup)` after defaults, validated against `g`.
    pub fn resolve(&self, g: &Graph) -> Result<(f64, f64)> {
        let rates = g.rates();
        let horizon = self.horizon.unwrap_or_else(|| {
            let clock = if rates.source > 0.0 { rates.source } else { rates.gossip };
            DEFAULT_SELF_UPDATES / clock
        });
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::param(format!("horizon must be positive, got {horizon}")));
        }
        let warmup = self.warmup.unwrap_or(DEFAULT_WARMUP_FRACTION * horizon);
        if !(warmup >= 0.0 && warmup < horizon) {
            return Err(Error::param(format!("warmup must be in [0, horizon), got {warmup}")));
        }
        if self.replications == 0 {
            return Err(Error::param("replications must be at least 1"));
        }
        if self.confidence_interval && self.replications < 2 {
            return Err(Error::param("a confidence interval needs at least 2 replications"));
        }
        if self.anchor >= g.n() {
            return Err(Error::param(format!("anchor {} out of range", self.anchor)));
        }
        Ok((horizon, warmup))
    }
}

/// Event totals by type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EventCounts {
    pub self_updates: u64,
    pub source_pushes: u64,
    pub gossips: u64,
}

impl EventCounts {
    pub fn total(&self) -> u64 {
        self.self_updates + self.source_pushes + self.gossips
    }

    fn add(&mut self, o: &EventCounts) {
        self.self_updates += o.self_updates;
        self.source_pushes += o.source_pushes;
        self.gossips += o.gossips;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub result: AgeResult,
    pub replication_means: Vec<f64>,
    /// Per-node time averages pooled over replications, when requested.
    pub per_node: Option<Vec<f64>>,
    /// Summed over replications.
    pub events: EventCounts,
    pub horizon: f64,
    pub warmup: f64,
}

struct Replication {
    mean: f64,
    per_node: Option<Vec<f64>>,
    events: EventCounts,
}

/// Sampling tables shared by all replications.
struct Tables {
    /// `None` when every node gossips at the same total rate.
    node_pick: Option<WeightedAliasIndex<f64>>,
    recipients: Vec<Option<WeightedAliasIndex<f64>>>,
    gossip_total: f64,
}

impl Tables {
    fn new(g: &Graph) -> Result<Self> {
        let out: Vec<f64> = (0..g.n()).map(|i| g.out_rate(i)).collect();
        let gossip_total: f64 = out.iter().sum();
        let regular = out.iter().all(|&r| r == out[0]);
        let alias = |w: Vec<f64>| WeightedAliasIndex::new(w).map_err(|e| Error::param(format!("alias table: {e}")));
        let node_pick = if regular { None } else { Some(alias(out.clone())?) };
        let recipients = (0..g.n())
            .map(|i| {
                let links = g.out_links(i);
                if links.is_empty() {
                    Ok(None)
                } else {
                    alias(links.iter().map(|l| l.rate).collect()).map(Some)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Tables {
            node_pick,
            recipients,
            gossip_total,
        })
    }
}

fn run_replication(g: &Graph, tables: &Tables, cfg: &SimConfig, horizon: f64, warmup: f64, rep: usize) -> Replication {
    let n = g.n();
    let rates = g.rates();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(rep as u64);

    let total_rate = rates.source + rates.gossip + tables.gossip_total;
    let clock = Exp::new(total_rate).expect("positive total rate");
    let p_self = rates.source / total_rate;
    let p_push = (rates.source + rates.gossip) / total_rate;

    let mut versions = vec![0u64; n];
    let mut source = 0u64;
    let mut version_sum = 0u64;
    let mut area = 0.0;
    // Lazy per-node integrals of N_i and the shared integral of N_0.
    let track = cfg.per_node || cfg.estimator == Estimator::SingleNode;
    let mut node_area = if track { vec![0.0; n] } else { Vec::new() };
    let mut node_since = if track { vec![warmup; n] } else { Vec::new() };
    let mut source_area = 0.0;

    let mut events = EventCounts::default();
    let mut t = 0.0;
    loop {
        let next = t + clock.sample(&mut rng);
        let (a, b) = (t.max(warmup), next.min(horizon));
        if b > a {
            let total_age = (n as u64 * source - version_sum) as f64;
            area += total_age * (b - a);
            source_area += source as f64 * (b - a);
        }
        if next >= horizon {
            break;
        }
        t = next;
        let u: f64 = rng.random();
        let (target, value) = if u < p_self {
            events.self_updates += 1;
            source += 1;
            continue;
        } else if u < p_push {
            events.source_pushes += 1;
            (rng.random_range(0..n), source)
        } else {
            events.gossips += 1;
            let from = match &tables.node_pick {
                Some(pick) => pick.sample(&mut rng),
                None => rng.random_range(0..n),
            };
            let Some(alias) = &tables.recipients[from] else {
                continue;
            };
            let to = g.out_links(from)[alias.sample(&mut rng)].node;
            (to, versions[from])
        };
        if value > versions[target] {
            if track && t > warmup {
                node_area[target] += versions[target] as f64 * (t - node_since[target]);
                node_since[target] = t;
            }
            version_sum += value - versions[target];
            versions[target] = value;
        }
        debug_assert!(versions[target] <= source);
    }

    let span = horizon - warmup;
    let per_node = track.then(|| {
        (0..n)
            .map(|i| {
                let own = node_area[i] + versions[i] as f64 * (horizon - node_since[i]);
                (source_area - own) / span
            })
            .collect::<Vec<_>>()
    });
    let mean = match cfg.estimator {
        Estimator::AllNodes => area / (span * n as f64),
        Estimator::SingleNode => per_node.as_ref().expect("tracked")[cfg.anchor],
    };
    Replication {
        mean,
        per_node: if cfg.per_node { per_node } else { None },
        events,
    }
}

/// Mean and 95% half-width (normal approximation) of replication means.
pub fn mean_ci(xs: &[f64]) -> (f64, Option<f64>) {
    let r = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / r;
    if xs.len() < 2 {
        return (mean, None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, Some(CI_Z * var.sqrt() / r.sqrt()))
}

/// Runs `cfg.replications` independent replications in parallel and pools
/// them. Results depend only on the graph and the config.
pub fn simulate(g: &Graph, cfg: &SimConfig) -> Result<SimReport> {
    let (horizon, warmup) = cfg.resolve(g)?;
    let tables = Tables::new(g)?;
    let reps: Vec<Replication> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_replication(g, &tables, cfg, horizon, warmup, rep))
        .collect();

    let means: Vec<f64> = reps.iter().map(|r| r.mean).collect();
    let (mean, ci) = mean_ci(&means);
    let mut events = EventCounts::default();
    for r in &reps {
        events.add(&r.events);
    }
    let per_node = cfg.per_node.then(|| {
        let mut acc = vec![0.0; g.n()];
        for r in &reps {
            for (a, x) in acc.iter_mut().zip(r.per_node.as_ref().expect("requested")) {
                *a += x;
            }
        }
        acc.iter().map(|a| a / reps.len() as f64).collect()
    });
    Ok(SimReport {
        result: AgeResult {
            value: mean,
            kind: AgeKind::Simulated,
            ci_halfwidth: if cfg.confidence_interval { ci } else { None },
            provenance: Provenance {
                seed: Some(cfg.seed),
                horizon: Some(horizon),
                replications: Some(cfg.replications),
                ..Provenance::default()
            },
        },
        replication_means: means,
        per_node,
        events,
        horizon,
        warmup,
    })
}
