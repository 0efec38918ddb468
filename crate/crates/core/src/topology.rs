//! Gossip graph construction.
//!
//! Every builder produces a [`Graph`] whose nodes each gossip at total rate
//! `λ`, split evenly over their neighbor slots. Parallel edges created by
//! wrap-around on very thin tori are merged and their rates summed, so the
//! per-node total stays `λ`.
//!
//! Node numbering:
//!
//! * ring: position on the cycle, `0..n`
//! * grid: row-major, `row * m + col` with `m` columns and `k` rows
//! * unit hypercube: the `m`-bit binary label
//! * torus hypercube: coordinate radix, `Σ x_i · m^i`
//! * fully connected: `0..n`

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source and gossip rates shared by every node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// Total gossip rate `λ` of each node; also the source's total push rate.
    pub gossip: f64,
    /// Source self-update rate `λe`.
    pub source: f64,
}

impl Default for Rates {
    fn default() -> Self {
        Rates {
            gossip: 1.0,
            source: 1.0,
        }
    }
}

impl Rates {
    pub fn new(gossip: f64, source: f64) -> Result<Self> {
        let rates = Rates { gossip, source };
        rates.validate()?;
        Ok(rates)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gossip.is_finite() && self.gossip > 0.0) {
            return Err(Error::param(format!(
                "gossip rate must be positive, got {}",
                self.gossip
            )));
        }
        if !(self.source.is_finite() && self.source >= 0.0) {
            return Err(Error::param(format!(
                "source rate must be non-negative, got {}",
                self.source
            )));
        }
        Ok(())
    }

    /// `λe / λ`, the version age of the whole network.
    pub fn ratio(&self) -> f64 {
        self.source / self.gossip
    }
}

/// Topology family together with its shape parameters.
///
/// Serializes adjacently tagged, e.g. `{"family":"grid","params":{"m":4,"k":3}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum Family {
    Ring { n: usize, f: usize },
    Grid { m: usize, k: usize },
    UnitHypercube { m: u32 },
    TorusHypercube { m: usize, d: u32 },
    FullyConnected { n: usize },
    Custom { n: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Ring { .. } => "ring",
            Family::Grid { .. } => "grid",
            Family::UnitHypercube { .. } => "unit_hypercube",
            Family::TorusHypercube { .. } => "torus_hypercube",
            Family::FullyConnected { .. } => "fully_connected",
            Family::Custom { .. } => "custom",
        }
    }

    /// Parameters as `key=value` pairs joined by `;` (CSV-safe).
    pub fn params(&self) -> String {
        match *self {
            Family::Ring { n, f } => format!("n={n};f={f}"),
            Family::Grid { m, k } => format!("m={m};k={k}"),
            Family::UnitHypercube { m } => format!("m={m}"),
            Family::TorusHypercube { m, d } => format!("m={m};d={d}"),
            Family::FullyConnected { n } | Family::Custom { n } => format!("n={n}"),
        }
    }

    /// Node count implied by the parameters (saturating on overflow).
    pub fn node_count(&self) -> usize {
        match *self {
            Family::Ring { n, .. } | Family::FullyConnected { n } | Family::Custom { n } => n,
            Family::Grid { m, k } => m.saturating_mul(k),
            Family::UnitHypercube { m } => 1usize.checked_shl(m).unwrap_or(usize::MAX),
            Family::TorusHypercube { m, d } => m.checked_pow(d).unwrap_or(usize::MAX),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params())
    }
}

/// Serializable topology descriptor: family, parameters and rates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyDescriptor {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "one")]
    pub lambda_e: f64,
}

fn one() -> f64 {
    1.0
}

impl TopologyDescriptor {
    pub fn new(family: Family, rates: Rates) -> Self {
        TopologyDescriptor {
            family,
            lambda: rates.gossip,
            lambda_e: rates.source,
        }
    }

    pub fn rates(&self) -> Result<Rates> {
        Rates::new(self.lambda, self.lambda_e)
    }

    pub fn build(&self) -> Result<Graph> {
        GraphBuilder::new().rates(self.rates()?).build(self.family)
    }
}

/// Size caps applied by [`GraphBuilder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildLimits {
    pub max_nodes: usize,
    pub max_hypercube_dim: u32,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits {
            max_nodes: 1 << 22,
            max_hypercube_dim: 20,
        }
    }
}

/// One directed gossip link `i → j` with Poisson rate `λ_ij`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Link {
    pub node: usize,
    pub rate: f64,
    /// Number of parallel edge slots merged into this link (1 unless the
    /// torus wraps onto the same neighbor twice).
    pub slots: u32,
}

/// Rate-weighted directed gossip graph. Immutable once built.
#[derive(Clone, Debug)]
pub struct Graph {
    family: Family,
    rates: Rates,
    out_links: Vec<Vec<Link>>,
    in_links: Vec<Vec<Link>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GraphBuilder {
    rates: Rates,
    limits: BuildLimits,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rates(mut self, rates: Rates) -> Self {
        self.rates = rates;
        self
    }

    pub fn limits(mut self, limits: BuildLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn build(&self, family: Family) -> Result<Graph> {
        match family {
            Family::Ring { n, f } => self.ring(n, f),
            Family::Grid { m, k } => self.grid(m, k),
            Family::UnitHypercube { m } => self.unit_hypercube(m),
            Family::TorusHypercube { m, d } => self.torus_hypercube(m, d),
            Family::FullyConnected { n } => self.fully_connected(n),
            Family::Custom { .. } => Err(Error::topology(
                "custom graphs are built from edge lists with Graph::from_links",
            )),
        }
    }

    fn check_nodes(&self, n: usize) -> Result<()> {
        if n > self.limits.max_nodes {
            return Err(Error::CapExceeded {
                what: "node count",
                limit: self.limits.max_nodes,
                reached: n,
            });
        }
        Ok(())
    }

    /// Each node gossips with the `f` nearest nodes on either side at `λ/(2f)`.
    pub fn ring(&self, n: usize, f: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::topology(format!("ring needs n >= 3, got {n}")));
        }
        if f < 1 || f > (n - 1) / 2 {
            return Err(Error::topology(format!(
                "ring with n={n} needs 1 <= f <= {}, got f={f}",
                (n - 1) / 2
            )));
        }
        self.check_nodes(n)?;
        let w = 1.0 / (2 * f) as f64;
        let slots = (0..n).map(|i| {
            (1..=f)
                .flat_map(move |s| [(i + s) % n, (i + n - s) % n])
                .map(move |j| (j, w))
                .collect::<Vec<_>>()
        });
        Ok(Graph::from_slots(Family::Ring { n, f }, self.rates, slots))
    }

    /// `m × k` torus, `m` columns by `k` rows, `λ/4` per directional slot.
    pub fn grid(&self, m: usize, k: usize) -> Result<Graph> {
        if k < 2 || m < k {
            return Err(Error::topology(format!("grid needs m >= k >= 2, got m={m}, k={k}")));
        }
        let n = m.checked_mul(k).ok_or_else(|| Error::topology("grid size overflows"))?;
        self.check_nodes(n)?;
        let slots = (0..n).map(|i| {
            let (row, col) = (i / m, i % m);
            vec![
                (row * m + (col + 1) % m, 0.25),
                (row * m + (col + m - 1) % m, 0.25),
                (((row + 1) % k) * m + col, 0.25),
                (((row + k - 1) % k) * m + col, 0.25),
            ]
        });
        Ok(Graph::from_slots(Family::Grid { m, k }, self.rates, slots))
    }

    /// `2^m` nodes labeled by bit strings; Hamming-distance-1 links at `λ/m`.
    pub fn unit_hypercube(&self, m: u32) -> Result<Graph> {
        if m < 1 {
            return Err(Error::topology("unit hypercube needs m >= 1"));
        }
        if m > self.limits.max_hypercube_dim {
            return Err(Error::CapExceeded {
                what: "hypercube dimension",
                limit: self.limits.max_hypercube_dim as usize,
                reached: m as usize,
            });
        }
        let n = 1usize << m;
        self.check_nodes(n)?;
        let w = 1.0 / m as f64;
        let slots = (0..n).map(|i| (0..m).map(|b| (i ^ (1 << b), w)).collect::<Vec<_>>());
        Ok(Graph::from_slots(Family::UnitHypercube { m }, self.rates, slots))
    }

    /// `m^d` torus with `±1` links in every coordinate at `λ/(2d)`.
    pub fn torus_hypercube(&self, m: usize, d: u32) -> Result<Graph> {
        if m < TORUS_MIN_SIDE || d < 1 {
            return Err(Error::topology(format!(
                "torus hypercube needs m >= {TORUS_MIN_SIDE} and d >= 1, got m={m}, d={d}"
            )));
        }
        let n = m
            .checked_pow(d)
            .filter(|&n| n <= self.limits.max_nodes)
            .ok_or(Error::CapExceeded {
                what: "node count",
                limit: self.limits.max_nodes,
                reached: m.saturating_pow(d),
            })?;
        let w = 1.0 / (2 * d) as f64;
        let slots = (0..n).map(|i| {
            let mut out = Vec::with_capacity(2 * d as usize);
            let mut stride = 1;
            for _ in 0..d {
                let x = (i / stride) % m;
                let base = i - x * stride;
                out.push((base + ((x + 1) % m) * stride, w));
                out.push((base + ((x + m - 1) % m) * stride, w));
                stride *= m;
            }
            out
        });
        Ok(Graph::from_slots(Family::TorusHypercube { m, d }, self.rates, slots))
    }

    /// Complete graph, `λ/(n-1)` per ordered pair.
    pub fn fully_connected(&self, n: usize) -> Result<Graph> {
        if n < 2 {
            return Err(Error::topology(format!("fully connected graph needs n >= 2, got {n}")));
        }
        self.check_nodes(n)?;
        let w = 1.0 / (n - 1) as f64;
        let slots = (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| (j, w)).collect::<Vec<_>>());
        Ok(Graph::from_slots(Family::FullyConnected { n }, self.rates, slots))
    }
}

/// Smallest side accepted for torus hypercubes; at `m = 2` the `±1`
/// neighbors would coincide.
pub const TORUS_MIN_SIDE: usize = 3;

/// Ring with default rates.
pub fn build_ring(n: usize, f: usize) -> Result<Graph> {
    GraphBuilder::new().ring(n, f)
}

/// Grid with default rates.
pub fn build_grid(m: usize, k: usize) -> Result<Graph> {
    GraphBuilder::new().grid(m, k)
}

pub fn build_unit_hypercube(m: u32) -> Result<Graph> {
    GraphBuilder::new().unit_hypercube(m)
}

pub fn build_torus_hypercube(m: usize, d: u32) -> Result<Graph> {
    GraphBuilder::new().torus_hypercube(m, d)
}

pub fn build_fully_connected(n: usize) -> Result<Graph> {
    GraphBuilder::new().fully_connected(n)
}

impl Graph {
    /// Builds from per-node `(target, weight)` slots; weights are fractions
    /// of `λ`, duplicates are summed.
    fn from_slots<I>(family: Family, rates: Rates, slots: I) -> Graph
    where
        I: Iterator<Item = Vec<(usize, f64)>>,
    {
        let out_links: Vec<Vec<Link>> = slots
            .map(|mut s| {
                s.sort_by_key(|&(j, _)| j);
                let mut merged: Vec<(usize, f64, u32)> = Vec::with_capacity(s.len());
                for (j, w) in s {
                    match merged.last_mut() {
                        Some(last) if last.0 == j => {
                            last.1 += w;
                            last.2 += 1;
                        }
                        _ => merged.push((j, w, 1)),
                    }
                }
                merged
                    .into_iter()
                    .map(|(node, w, slots)| Link {
                        node,
                        rate: rates.gossip * w,
                        slots,
                    })
                    .collect()
            })
            .collect();
        Graph::from_out_links(family, rates, out_links)
    }

    fn from_out_links(family: Family, rates: Rates, out_links: Vec<Vec<Link>>) -> Graph {
        let mut in_links = vec![Vec::new(); out_links.len()];
        for (i, links) in out_links.iter().enumerate() {
            for l in links {
                in_links[l.node].push(Link { node: i, ..*l });
            }
        }
        Graph {
            family,
            rates,
            out_links,
            in_links,
        }
    }

    /// Arbitrary graph from directed links `(from, to, λ_ij)`. Parallel links
    /// are merged; self-loops and non-positive rates are rejected.
    pub fn from_links<I>(n: usize, links: I, rates: Rates) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        rates.validate()?;
        if n == 0 {
            return Err(Error::topology("graph needs at least one node"));
        }
        let mut slots: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, rate) in links {
            if i >= n || j >= n {
                return Err(Error::topology(format!("link ({i}, {j}) out of range for n={n}")));
            }
            if i == j {
                return Err(Error::topology(format!("self-loop at node {i}")));
            }
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::topology(format!("link ({i}, {j}) has rate {rate}")));
            }
            slots[i].push((j, rate / rates.gossip));
        }
        let g = Graph::from_slots(Family::Custom { n }, rates, slots.into_iter());
        if !g.is_connected() {
            return Err(Error::topology("graph is not connected"));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.out_links.len()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rates(&self) -> Rates {
        self.rates
    }

    /// Per-node source push rate `λ/n`.
    pub fn source_to_node_rate(&self) -> f64 {
        self.rates.gossip / self.n() as f64
    }

    /// Outgoing links of `i`, sorted by target.
    pub fn out_links(&self, i: usize) -> &[Link] {
        &self.out_links[i]
    }

    /// Incoming links of `j`, sorted by source.
    pub fn in_links(&self, j: usize) -> &[Link] {
        &self.in_links[j]
    }

    /// `λ_ij`, zero when there is no link.
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.out_links[i]
            .binary_search_by_key(&j, |l| l.node)
            .map(|p| self.out_links[i][p].rate)
            .unwrap_or(0.0)
    }

    /// Number of distinct gossip targets of `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.out_links[i].len()
    }

    /// Edge slots of `i` counting merged parallel edges separately.
    pub fn slot_degree(&self, i: usize) -> usize {
        self.out_links[i].iter().map(|l| l.slots as usize).sum()
    }

    /// `Σ_j λ_ij`.
    pub fn out_rate(&self, i: usize) -> f64 {
        self.out_links[i].iter().map(|l| l.rate).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|i| self.out_links[i].iter().all(|l| self.rate(l.node, i) == l.rate))
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for l in self.out_links[u].iter().chain(&self.in_links[u]) {
                if !seen[l.node] {
                    seen[l.node] = true;
                    count += 1;
                    queue.push_back(l.node);
                }
            }
        }
        count == n
    }

    /// Bitmask of nodes that push into `j`, when `n <= 64`.
    pub(crate) fn in_masks(&self) -> Option<Vec<u64>> {
        (self.n() <= 64).then(|| {
            self.in_links
                .iter()
                .map(|ls| ls.iter().fold(0u64, |m, l| m | 1 << l.node))
                .collect()
        })
    }

    /// Histogram of distinct-neighbor counts as `(degree, node count)`.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for i in 0..self.n() {
            *hist.entry(self.degree(i)).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    pub fn descriptor(&self) -> TopologyDescriptor {
        TopologyDescriptor::new(self.family, self.rates)
    }
}
