//! Connected-subset geometry: neighbor sets, incoming/inner edge counts,
//! connected-subset enumeration, and the minimum-incoming-edge formulas
//! together with a brute-force oracle that certifies them.
//!
//! Edge counts are taken over edge *slots*: a link that merges two parallel
//! wrap-around edges counts twice. On graphs without merged links this is
//! the plain number of edges.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::topology::{Family, Graph};

/// Incoming, inner and neighbor counts of a node set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCounts {
    /// `|E(S)|`: edge slots from outside `S` into `S`.
    pub incoming: usize,
    /// `|Ē(S)|`: edge slots with both ends in `S`, each pair counted once.
    pub inner: usize,
    /// `|N(S)|`.
    pub neighbors: usize,
}

fn check_set(g: &Graph, s: &NodeSet) -> Result<()> {
    if s.universe() != g.n() {
        return Err(Error::InvalidSet(format!(
            "set over {} nodes used with a graph of {} nodes",
            s.universe(),
            g.n()
        )));
    }
    if s.is_empty() {
        return Err(Error::InvalidSet("empty set".into()));
    }
    Ok(())
}

/// `λ_i(S)`: total rate from node `i` into `S` (zero when `i ∈ S`).
pub fn inflow_rate(g: &Graph, i: usize, s: &NodeSet) -> f64 {
    if s.contains(i) {
        return 0.0;
    }
    g.out_links(i)
        .iter()
        .filter(|l| s.contains(l.node))
        .map(|l| l.rate)
        .sum()
}

/// `λ_0(S) = λ|S|/n`, the source's rate into `S`.
pub fn source_inflow(g: &Graph, s: &NodeSet) -> f64 {
    g.source_to_node_rate() * s.len() as f64
}

/// `N(S)`: nodes outside `S` with a link into `S`.
pub fn neighbor_set(g: &Graph, s: &NodeSet) -> Result<NodeSet> {
    check_set(g, s)?;
    let mut out = NodeSet::empty(g.n());
    for a in s.iter() {
        for l in g.in_links(a) {
            if !s.contains(l.node) {
                out.insert(l.node);
            }
        }
    }
    Ok(out)
}

pub fn edge_counts(g: &Graph, s: &NodeSet) -> Result<EdgeCounts> {
    check_set(g, s)?;
    let mut incoming = 0;
    let mut inner_ordered = 0;
    let mut nb = NodeSet::empty(g.n());
    for a in s.iter() {
        for l in g.in_links(a) {
            if s.contains(l.node) {
                inner_ordered += l.slots as usize;
            } else {
                incoming += l.slots as usize;
                nb.insert(l.node);
            }
        }
    }
    Ok(EdgeCounts {
        incoming,
        inner: inner_ordered / 2,
        neighbors: nb.len(),
    })
}

/// Whether `S` induces a connected subgraph (links taken as undirected).
pub fn is_connected_set(g: &Graph, s: &NodeSet) -> bool {
    let Some(start) = s.iter().next() else {
        return false;
    };
    let mut seen = NodeSet::singleton(g.n(), start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for l in g.out_links(u).iter().chain(g.in_links(u)) {
            if s.contains(l.node) && !seen.contains(l.node) {
                seen.insert(l.node);
                stack.push(l.node);
            }
        }
    }
    seen.len() == s.len()
}

/// What [`ConnectedSubsets`] should yield.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Every connected set with exactly this many nodes.
    Size(usize),
    /// Every connected set with at most this many nodes.
    UpToSize(usize),
    /// Every connected set containing `anchor`, optionally size-capped.
    Anchored { anchor: usize, max_size: Option<usize> },
}

/// Node-count caps for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// For [`Enumeration::Size`] and [`Enumeration::UpToSize`].
    pub max_nodes_sized: usize,
    /// For [`Enumeration::Anchored`] without a size cap.
    pub max_nodes_anchored: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_nodes_sized: 64,
            max_nodes_anchored: 20,
        }
    }
}

struct Frame {
    set: u64,
    excluded: u64,
    frontier: u64,
    remaining: u64,
}

/// Streams connected subsets as 64-bit masks, each exactly once.
///
/// Sets are grown from their smallest node (or from the anchor). At each
/// step the frontier candidates are taken in increasing index order; the
/// branch that adds candidate `c` excludes every earlier candidate, which
/// makes the decomposition unique.
pub struct ConnectedSubsets {
    adjacency: Vec<u64>,
    max_size: usize,
    exact_size: Option<usize>,
    roots: std::ops::Range<usize>,
    rooted_below_excluded: bool,
    stack: Vec<Frame>,
}

impl ConnectedSubsets {
    pub fn new(g: &Graph, target: Enumeration) -> Result<Self> {
        Self::with_limits(g, target, EnumerationLimits::default())
    }

    pub fn with_limits(g: &Graph, target: Enumeration, limits: EnumerationLimits) -> Result<Self> {
        let n = g.n();
        let cap = match target {
            Enumeration::Anchored { max_size: None, .. } => limits.max_nodes_anchored,
            _ => limits.max_nodes_sized,
        }
        .min(64);
        if n > cap {
            return Err(Error::CapExceeded {
                what: "nodes for connected-subset enumeration",
                limit: cap,
                reached: n,
            });
        }
        let adjacency = undirected_masks(g);
        let (max_size, exact_size, roots, below) = match target {
            Enumeration::Size(j) => (j, Some(j), 0..n, true),
            Enumeration::UpToSize(j) => (j, None, 0..n, true),
            Enumeration::Anchored { anchor, max_size } => {
                if anchor >= n {
                    return Err(Error::InvalidSet(format!("anchor {anchor} out of range")));
                }
                (max_size.unwrap_or(n), None, anchor..anchor + 1, false)
            }
        };
        let roots = if max_size == 0 { 0..0 } else { roots };
        Ok(ConnectedSubsets {
            adjacency,
            max_size,
            exact_size,
            roots,
            rooted_below_excluded: below,
            stack: Vec::new(),
        })
    }

    /// Enumeration over sets whose smallest node is `root`.
    fn rooted(adjacency: Vec<u64>, root: usize, max_size: usize, exact: Option<usize>) -> Self {
        ConnectedSubsets {
            adjacency,
            max_size,
            exact_size: exact,
            roots: root..root + 1,
            rooted_below_excluded: true,
            stack: Vec::new(),
        }
    }

    fn wants(&self, set: u64) -> bool {
        self.exact_size.is_none_or(|j| set.count_ones() as usize == j)
    }

    fn push(&mut self, set: u64, excluded: u64, frontier: u64) {
        let remaining = if (set.count_ones() as usize) < self.max_size {
            frontier & !set & !excluded
        } else {
            0
        };
        self.stack.push(Frame {
            set,
            excluded,
            frontier,
            remaining,
        });
    }
}

impl Iterator for ConnectedSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if let Some(top) = self.stack.last_mut() {
                if top.remaining == 0 {
                    self.stack.pop();
                    continue;
                }
                let c = top.remaining & top.remaining.wrapping_neg();
                top.remaining &= !c;
                let set = top.set | c;
                let excluded = top.excluded;
                let frontier = top.frontier | self.adjacency[c.trailing_zeros() as usize];
                top.excluded |= c;
                self.push(set, excluded, frontier);
                if self.wants(set) {
                    return Some(set);
                }
            } else {
                let root = self.roots.next()?;
                let set = 1u64 << root;
                let excluded = if self.rooted_below_excluded { set - 1 } else { 0 };
                self.push(set, excluded, self.adjacency[root]);
                if self.wants(set) {
                    return Some(set);
                }
            }
        }
    }
}

fn undirected_masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|i| {
            g.out_links(i)
                .iter()
                .chain(g.in_links(i))
                .fold(0u64, |m, l| m | 1 << l.node)
        })
        .collect()
}

/// Stream of connected subsets as [`NodeSet`]s.
pub fn enumerate_connected_subsets(g: &Graph, target: Enumeration) -> Result<impl Iterator<Item = NodeSet>> {
    let n = g.n();
    let it = ConnectedSubsets::new(g, target)?;
    Ok(it.map(move |mask| NodeSet::from_mask(n, mask).expect("mask within universe")))
}

/// Incoming-slot counter over 64-bit masks.
struct SlotCounter {
    /// `layers[t][a]`: nodes with at least `t+1` slots into `a`.
    layers: Vec<Vec<u64>>,
}

impl SlotCounter {
    fn new(g: &Graph) -> Self {
        let max_slots = (0..g.n())
            .flat_map(|a| g.in_links(a).iter().map(|l| l.slots))
            .max()
            .unwrap_or(1);
        let layers = (1..=max_slots)
            .map(|t| {
                (0..g.n())
                    .map(|a| {
                        g.in_links(a)
                            .iter()
                            .filter(|l| l.slots >= t)
                            .fold(0u64, |m, l| m | 1 << l.node)
                    })
                    .collect()
            })
            .collect();
        SlotCounter { layers }
    }

    fn incoming(&self, set: u64) -> usize {
        let outside = !set;
        let mut total = 0;
        for layer in &self.layers {
            let mut bits = set;
            while bits != 0 {
                let a = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                total += (layer[a] & outside).count_ones() as usize;
            }
        }
        total
    }
}

/// Minimum incoming-edge count over connected sets of one size, with the
/// smallest-mask minimizer as witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremal {
    pub size: usize,
    pub count: usize,
    pub witness: NodeSet,
}

fn merge_min(a: Option<(usize, u64)>, b: Option<(usize, u64)>) -> Option<(usize, u64)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exhaustive minimum of `|E(S)|` over connected `S` with `|S| = j`.
pub fn min_incoming_bruteforce(g: &Graph, j: usize) -> Result<Extremal> {
    let all = min_incoming_by_size(g, j)?;
    all.into_iter()
        .find(|e| e.size == j)
        .ok_or_else(|| Error::param(format!("no connected set of size {j}")))
}

/// Exhaustive minima for every size `1..=max_j`, in one enumeration pass.
/// Roots are processed in parallel; results are independent of scheduling.
pub fn min_incoming_by_size(g: &Graph, max_j: usize) -> Result<Vec<Extremal>> {
    let n = g.n();
    if max_j == 0 || max_j > n {
        return Err(Error::param(format!("set size must be in 1..={n}, got {max_j}")));
    }
    // validates the node cap
    ConnectedSubsets::new(g, Enumeration::UpToSize(max_j))?;
    let adjacency = undirected_masks(g);
    let counter = SlotCounter::new(g);
    let best = (0..n)
        .into_par_iter()
        .map(|root| {
            let mut best: Vec<Option<(usize, u64)>> = vec![None; max_j + 1];
            for set in ConnectedSubsets::rooted(adjacency.clone(), root, max_j, None) {
                let size = set.count_ones() as usize;
                let cand = Some((counter.incoming(set), set));
                best[size] = merge_min(best[size], cand);
            }
            best
        })
        .reduce(
            || vec![None; max_j + 1],
            |a, b| a.into_iter().zip(b).map(|(x, y)| merge_min(x, y)).collect(),
        );
    Ok(best
        .into_iter()
        .enumerate()
        .filter_map(|(size, b)| {
            b.map(|(count, mask)| Extremal {
                size,
                count,
                witness: NodeSet::from_mask(n, mask).expect("mask within universe"),
            })
        })
        .collect())
}

/// Which variant of the incoming-edge formula to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundForm {
    /// Integer forms with ceilings, as attained by the extremal sets.
    #[default]
    Tight,
    /// Ceiling- and floor-free forms used by the recursive age bounds.
    Relaxed,
}

/// A lower bound `L(j)` on `|E(S)|` for connected `|S| = j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IncomingBound {
    pub value: f64,
    /// Set when the bound is conjectured rather than proven.
    pub conjecture: bool,
    /// 1-based regime index within the family's piecewise formula.
    pub regime: u8,
}

/// `h(i)`: number of ones in the binary expansion of `i`.
pub fn digit_sum_h(i: u64) -> u32 {
    i.count_ones()
}

/// `Σ_{i=0}^{j-1} h(i)`, the largest inner-edge count of a `j`-node induced
/// subgraph of a hypercube.
pub fn hart_sum(j: u64) -> u64 {
    // Closed form over bit positions: bit b is set in ⌊j/2^{b+1}⌋·2^b full
    // blocks plus the tail of a partial block.
    let mut total = 0;
    let mut b = 0;
    while b < 64 && (1u64 << b) < j.max(1) {
        let block = 1u64 << (b + 1);
        let half = 1u64 << b;
        total += (j / block) * half + (j % block).saturating_sub(half);
        b += 1;
    }
    total
}

/// Simplified digit-sum bound `½·j·⌈log₂ j⌉` (zero for `j ≤ 1`).
pub fn bush_bound(j: u64) -> f64 {
    if j <= 1 {
        return 0.0;
    }
    0.5 * j as f64 * ceil_log2(j) as f64
}

pub(crate) fn ceil_log2(j: u64) -> u32 {
    debug_assert!(j >= 1);
    64 - (j - 1).leading_zeros()
}

/// Lower bound on incoming edges of any connected `j`-set of the family.
///
/// Full sets have no incoming edges; any other nonempty set is bounded
/// below by at least 1.
pub fn min_incoming_formula(family: Family, j: usize, form: BoundForm) -> Result<IncomingBound> {
    let n = family.node_count();
    if j == 0 || j > n {
        return Err(Error::param(format!("set size must be in 1..={n}, got {j}")));
    }
    let bound = |value: f64, regime: u8, conjecture: bool| IncomingBound {
        value: if j == n { 0.0 } else { value.max(1.0) },
        conjecture,
        regime,
    };
    let jf = j as f64;
    Ok(match family {
        Family::Grid { m, k } => {
            let t = k * k / 4;
            let total = m * k;
            if j <= t {
                let v = match form {
                    BoundForm::Tight => 2.0 * (2.0 * jf.sqrt()).ceil(),
                    BoundForm::Relaxed => 2.0 * jf.sqrt(),
                };
                bound(v, 1, false)
            } else if j <= total - t {
                bound(2.0 * k as f64, 2, false)
            } else {
                let rest = (total - j) as f64;
                let v = match form {
                    BoundForm::Tight => 2.0 * (2.0 * rest.sqrt()).ceil(),
                    BoundForm::Relaxed => 4.0 * rest.sqrt().floor(),
                };
                bound(v, 3, false)
            }
        }
        Family::Ring { n, f } => {
            let (v, regime) = ring_incoming(n, f, j);
            bound(v as f64, regime, false)
        }
        Family::FullyConnected { n } => bound((j * (n - j)) as f64, 1, false),
        Family::UnitHypercube { m } => {
            let half = n / 2;
            let (size, regime) = if j <= half { (j, 1) } else { (n - j, 2) };
            if size == 0 {
                bound(0.0, regime, false)
            } else {
                let s = size as u64;
                let v = match form {
                    BoundForm::Tight => (m as u64 * s) as f64 - 2.0 * hart_sum(s) as f64,
                    BoundForm::Relaxed => s as f64 * (m as f64 - ceil_log2(s) as f64),
                };
                bound(v, regime, false)
            }
        }
        Family::TorusHypercube { d, .. } => {
            let e = (d as f64 - 1.0) / d as f64;
            let (size, regime) = if 2 * j <= n { (j, 1) } else { (n - j, 2) };
            bound((size as f64).powf(e), regime, d >= 3)
        }
        Family::Custom { .. } => {
            return Err(Error::param("no incoming-edge formula for custom graphs"));
        }
    })
}

/// Incoming edges of a `j`-node arc on the generalized ring, by regime.
fn ring_incoming(n: usize, f: usize, j: usize) -> (usize, u8) {
    if j <= f {
        (2 * j * f - j * (j - 1), 1)
    } else if j < n - f {
        (f * (f + 1), 2)
    } else {
        let r = n - j;
        (2 * r * f - r * r.saturating_sub(1), 3)
    }
}

/// First `j` cells of a square spiral centered at `(row, col)` on an
/// `m × k` torus (row-major numbering). Fails if the spiral would wrap onto
/// itself.
pub fn grid_spiral(m: usize, k: usize, j: usize, center: (usize, usize)) -> Result<NodeSet> {
    let n = m * k;
    if j == 0 || j > n {
        return Err(Error::param(format!("spiral size must be in 1..={n}, got {j}")));
    }
    let (mut r, mut c) = (center.0 as i64, center.1 as i64);
    let mut set = NodeSet::empty(n);
    let idx = |r: i64, c: i64| (r.rem_euclid(k as i64) as usize) * m + c.rem_euclid(m as i64) as usize;
    set.insert(idx(r, c));
    let dirs = [(0i64, 1i64), (-1, 0), (0, -1), (1, 0)];
    let (mut leg, mut dir, mut placed) = (1usize, 0usize, 1usize);
    'outer: while placed < j {
        for _ in 0..2 {
            for _ in 0..leg {
                if placed == j {
                    break 'outer;
                }
                r += dirs[dir].0;
                c += dirs[dir].1;
                set.insert(idx(r, c));
                placed += 1;
            }
            dir = (dir + 1) % 4;
        }
        leg += 1;
    }
    if set.len() != j {
        return Err(Error::param(format!("spiral of {j} cells wraps on a {m}x{k} torus")));
    }
    Ok(set)
}

/// First `j` nodes in row-major order: full rows, then a partial row
/// starting at column 0.
pub fn grid_row_band(m: usize, k: usize, j: usize) -> Result<NodeSet> {
    NodeSet::from_indices(m * k, 0..j)
}
