use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::ceil_log2;
use crate::topology::{Family, Rates};

/// Chains longer than this keep only regime-boundary samples.
pub const FULL_STORAGE_LIMIT: usize = 100_000;

/// Largest hypercube dimension a chain is evaluated for.
pub const MAX_CHAIN_HYPERCUBE_DIM: u32 = 30;

/// One backward step `v_j = (numerator + c·v_{j+1}) / (j/n + c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainStep {
    pub numerator: f64,
    pub coefficient: f64,
}

/// Backward-evaluated bound chain `v_n, …, v_1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundChain {
    pub family: Family,
    pub n: usize,
    pub v1: f64,
    /// `values[j-1] = v_j`, kept when `n` is at most [`FULL_STORAGE_LIMIT`].
    pub values: Option<Vec<f64>>,
    /// `(j, v_j)` at `j = n`, each regime threshold, and `j = 1`.
    pub samples: Vec<(usize, f64)>,
    /// Largest `j` of each regime except the last, ascending.
    pub thresholds: Vec<usize>,
    pub conjecture: bool,
}

impl BoundChain {
    /// `v_j` when stored or sampled.
    pub fn value(&self, j: usize) -> Option<f64> {
        if j == 0 || j > self.n {
            return None;
        }
        match &self.values {
            Some(v) => Some(v[j - 1]),
            None => self.samples.iter().find(|s| s.0 == j).map(|s| s.1),
        }
    }
}

/// Runs a chain backward from `v_n = λe/λ` using `step(j)` for
/// `j = n-1, …, 1`.
pub fn evaluate_chain<F>(
    family: Family,
    n: usize,
    rates: Rates,
    thresholds: Vec<usize>,
    conjecture: bool,
    step: F,
) -> Result<BoundChain>
where
    F: Fn(usize) -> ChainStep,
{
    rates.validate()?;
    if n == 0 {
        return Err(Error::param("chain needs at least one node"));
    }
    let store = n <= FULL_STORAGE_LIMIT;
    let mut values = if store { vec![0.0; n] } else { Vec::new() };
    let mut samples = Vec::with_capacity(thresholds.len() + 2);
    let nf = n as f64;
    let mut v = rates.ratio();
    if store {
        values[n - 1] = v;
    }
    samples.push((n, v));
    for j in (1..n).rev() {
        let s = step(j);
        let den = j as f64 / nf + s.coefficient;
        if den <= 0.0 {
            return Err(Error::ZeroDenominator);
        }
        v = (s.numerator + s.coefficient * v) / den;
        if store {
            values[j - 1] = v;
        }
        if j == 1 || thresholds.binary_search(&j).is_ok() {
            samples.push((j, v));
        }
    }
    samples.sort_by_key(|s| std::cmp::Reverse(s.0));
    samples.dedup_by_key(|s| s.0);
    Ok(BoundChain {
        family,
        n,
        v1: v,
        values: store.then_some(values),
        samples,
        thresholds,
        conjecture,
    })
}

/// Three-regime chain for the `m × k` torus grid (`m ≥ k`).
pub fn grid_bound_chain(m: usize, k: usize, rates: Rates) -> Result<BoundChain> {
    if k < 2 || m < k {
        return Err(Error::param(format!("grid chain needs m >= k >= 2, got {m}x{k}")));
    }
    let n = m * k;
    let t = k * k / 4;
    let r = rates.ratio();
    let kf = k as f64;
    evaluate_chain(Family::Grid { m, k }, n, rates, vec![t, n - t], false, |j| {
        if j <= t {
            ChainStep {
                numerator: 2.0 * r,
                coefficient: (j as f64).sqrt(),
            }
        } else if j <= n - t {
            ChainStep {
                numerator: 2.0 * r,
                coefficient: kf,
            }
        } else {
            ChainStep {
                numerator: r,
                coefficient: ((n - j) as f64).sqrt().floor(),
            }
        }
    })
}

/// Three-regime chain for the generalized ring with `f` links per side.
pub fn ring_bound_chain(n: usize, f: usize, rates: Rates) -> Result<BoundChain> {
    if n < 3 || f == 0 || f > (n - 1) / 2 {
        return Err(Error::param(format!(
            "ring chain needs n >= 3 and 1 <= f <= (n-1)/2, got n={n}, f={f}"
        )));
    }
    let r = rates.ratio();
    let two_f = 2.0 * f as f64;
    let arc = |j: usize| (2 * j * f - j * (j - 1)) as f64 / two_f;
    let middle = (f as f64 + 1.0) / 2.0;
    evaluate_chain(Family::Ring { n, f }, n, rates, vec![f, n - f - 1], false, |j| {
        let coefficient = if j <= f {
            arc(j)
        } else if j < n - f {
            middle
        } else {
            arc(n - j)
        };
        ChainStep {
            numerator: r,
            coefficient,
        }
    })
}

/// Rounding of `n^α` to an integer link count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FConvention {
    /// `⌊n^α⌋`.
    Floor,
    /// Largest integer strictly below `n^α`; differs from `Floor` only when
    /// `n^α` is an integer (to a relative `1e-9`).
    #[default]
    StrictFloor,
}

/// `f(n) = n^α` as an integer in `1..=(n-1)/2`.
pub fn ring_alpha_f(n: usize, alpha: f64, convention: FConvention) -> Result<usize> {
    if !(0.0..1.0).contains(&alpha) || n < 3 {
        return Err(Error::param(format!(
            "need 0 <= alpha < 1 and n >= 3, got alpha={alpha}, n={n}"
        )));
    }
    let real = (n as f64).powf(alpha);
    let nearest = real.round();
    let f = match convention {
        FConvention::Floor if (real - nearest).abs() <= 1e-9 * real => nearest,
        FConvention::Floor => real.floor(),
        FConvention::StrictFloor if (real - nearest).abs() <= 1e-9 * real => nearest - 1.0,
        FConvention::StrictFloor => real.floor(),
    };
    Ok((f.max(1.0) as usize).min((n - 1) / 2))
}

/// Ring chain with `f = n^α` rounded per `convention`.
pub fn ring_alpha_bound_chain(n: usize, alpha: f64, convention: FConvention, rates: Rates) -> Result<BoundChain> {
    ring_bound_chain(n, ring_alpha_f(n, alpha, convention)?, rates)
}

/// Two-regime chain for the unit hypercube with `2^m` nodes.
pub fn unit_hypercube_bound_chain(m: u32, rates: Rates) -> Result<BoundChain> {
    if m == 0 || m > MAX_CHAIN_HYPERCUBE_DIM {
        return Err(Error::param(format!(
            "hypercube chain needs 1 <= m <= {MAX_CHAIN_HYPERCUBE_DIM}, got {m}"
        )));
    }
    let n = 1usize << m;
    let half = n / 2;
    let r = rates.ratio();
    let mf = m as f64;
    let coef = |s: usize| s as f64 * (mf - ceil_log2(s as u64) as f64) / mf;
    evaluate_chain(Family::UnitHypercube { m }, n, rates, vec![half], false, |j| {
        let s = if j <= half { j } else { n - j };
        ChainStep {
            numerator: r,
            coefficient: coef(s),
        }
    })
}

/// Conjectured chain for the `d`-dimensional torus with side `m`.
pub fn ddim_bound_chain(m: usize, d: u32, rates: Rates) -> Result<BoundChain> {
    if d < 2 || m < 2 {
        return Err(Error::param(format!(
            "d-dimensional chain needs d >= 2 and m >= 2, got m={m}, d={d}"
        )));
    }
    let n = m
        .checked_pow(d)
        .ok_or_else(|| Error::param(format!("m^d overflows for m={m}, d={d}")))?;
    let e = (d as f64 - 1.0) / d as f64;
    let num = 2.0 * d as f64 * rates.ratio();
    evaluate_chain(Family::TorusHypercube { m, d }, n, rates, vec![n / 2], true, |j| {
        let s = if 2 * j <= n { j } else { n - j };
        ChainStep {
            numerator: num,
            coefficient: (s as f64).powf(e),
        }
    })
}

/// Exact ages of the fully connected network, which depend only on `|S|`.
pub fn fully_connected_chain(n: usize, rates: Rates) -> Result<BoundChain> {
    if n < 2 {
        return Err(Error::param("fully connected chain needs n >= 2"));
    }
    let r = rates.ratio();
    let denom = (n - 1) as f64;
    evaluate_chain(Family::FullyConnected { n }, n, rates, Vec::new(), false, |j| {
        ChainStep {
            numerator: r,
            coefficient: (j * (n - j)) as f64 / denom,
        }
    })
}

/// The chain for a family; `d = 1` tori use the ring chain and `d = 2` the
/// grid chain.
pub fn bound_chain(family: Family, rates: Rates) -> Result<BoundChain> {
    match family {
        Family::Ring { n, f } => ring_bound_chain(n, f, rates),
        Family::Grid { m, k } => grid_bound_chain(m.max(k), m.min(k), rates),
        Family::UnitHypercube { m } => unit_hypercube_bound_chain(m, rates),
        Family::TorusHypercube { m, d: 1 } => ring_bound_chain(m, 1, rates).map(|c| BoundChain { family, ..c }),
        Family::TorusHypercube { m, d: 2 } => grid_bound_chain(m, m, rates).map(|c| BoundChain { family, ..c }),
        Family::TorusHypercube { m, d } => ddim_bound_chain(m, d, rates),
        Family::FullyConnected { n } => fully_connected_chain(n, rates),
        Family::Custom { .. } => Err(Error::param("no bound chain for custom graphs")),
    }
}
