//! Exact stationary version ages of connected sets on small graphs.
//!
//! `v_S` depends only on `v_{S∪{i}}` for neighbors `i`, so the ages form a
//! DAG rooted at the full set (`v_N = λe/λ`). The solver evaluates it
//! top-down with a memo keyed by the 64-bit subset mask; only connected
//! supersets of the queried set are ever visited.

use std::collections::HashMap;

use crate::age::AgeResult;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::subset::{is_connected_set, ConnectedSubsets, Enumeration};
use crate::topology::Graph;

/// Default cap on memoized subsets.
pub const DEFAULT_MAX_STATES: usize = 5_000_000;

/// One term of the recursion at `S`: neighbor `i`, its inflow `λ_i(S)`, and
/// `v_{S∪{i}}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeighborTerm {
    pub node: usize,
    pub inflow: f64,
    pub age: f64,
}

/// Memoizing solver bound to one graph. Reuse it across queries to share
/// the memo.
pub struct ExactSolver<'g> {
    graph: &'g Graph,
    max_states: usize,
    in_masks: Vec<u64>,
    full: u64,
    memo: HashMap<u64, f64>,
}

impl<'g> ExactSolver<'g> {
    pub fn new(graph: &'g Graph) -> Result<Self> {
        let n = graph.n();
        let in_masks = graph.in_masks().ok_or(Error::CapExceeded {
            what: "nodes for exact solving",
            limit: 64,
            reached: n,
        })?;
        Ok(ExactSolver {
            graph,
            max_states: DEFAULT_MAX_STATES,
            in_masks,
            full: if n == 64 { u64::MAX } else { (1 << n) - 1 },
            memo: HashMap::new(),
        })
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    /// Number of memoized subsets so far.
    pub fn states(&self) -> usize {
        self.memo.len()
    }

    fn mask_of(&self, s: &NodeSet) -> Result<u64> {
        if s.universe() != self.graph.n() {
            return Err(Error::InvalidSet(format!(
                "set over {} nodes used with a graph of {} nodes",
                s.universe(),
                self.graph.n()
            )));
        }
        if s.is_empty() {
            return Err(Error::InvalidSet("empty set".into()));
        }
        if !is_connected_set(self.graph, s) {
            return Err(Error::Disconnected);
        }
        Ok(s.as_mask().expect("n <= 64 checked at construction"))
    }

    fn neighbors(&self, set: u64) -> u64 {
        let mut nb = 0;
        let mut bits = set;
        while bits != 0 {
            nb |= self.in_masks[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        nb & !set
    }

    fn inflow(&self, i: usize, set: u64) -> f64 {
        self.graph
            .out_links(i)
            .iter()
            .filter(|l| set >> l.node & 1 == 1)
            .map(|l| l.rate)
            .sum()
    }

    /// `v_S` for a connected nonempty set.
    pub fn age(&mut self, s: &NodeSet) -> Result<AgeResult> {
        let mask = self.mask_of(s)?;
        let value = self.age_mask(mask)?;
        Ok(AgeResult::exact(value, self.memo.len()))
    }

    /// `v_S` by mask, without the connectivity check.
    pub fn age_mask(&mut self, set: u64) -> Result<f64> {
        if let Some(&v) = self.memo.get(&set) {
            return Ok(v);
        }
        let rates = self.graph.rates();
        if set == self.full {
            let v = rates.ratio();
            self.memo.insert(set, v);
            return Ok(v);
        }
        // Explicit stack: a frame is revisited once all its supersets are known.
        let mut stack = vec![set];
        while let Some(&top) = stack.last() {
            if self.memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let nb = self.neighbors(top);
            let mut pending = false;
            let mut bits = nb;
            while bits != 0 {
                let up = top | 1 << bits.trailing_zeros();
                bits &= bits - 1;
                if up == self.full {
                    self.memo.entry(up).or_insert(rates.ratio());
                } else if !self.memo.contains_key(&up) {
                    stack.push(up);
                    pending = true;
                }
            }
            if pending {
                continue;
            }
            stack.pop();
            let mut num = rates.source;
            let mut den = self.graph.source_to_node_rate() * top.count_ones() as f64;
            let mut bits = nb;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let w = self.inflow(i, top);
                num += w * self.memo[&(top | 1 << i)];
                den += w;
            }
            if den <= 0.0 {
                return Err(Error::ZeroDenominator);
            }
            if self.memo.len() >= self.max_states {
                return Err(Error::CapExceeded {
                    what: "memoized subsets for exact solving",
                    limit: self.max_states,
                    reached: self.memo.len(),
                });
            }
            self.memo.insert(top, num / den);
        }
        Ok(self.memo[&set])
    }

    /// The recursion terms at `S`, one per neighbor, in node order.
    pub fn neighbor_terms(&mut self, s: &NodeSet) -> Result<Vec<NeighborTerm>> {
        let mask = self.mask_of(s)?;
        let nb = self.neighbors(mask);
        let mut out = Vec::with_capacity(nb.count_ones() as usize);
        let mut bits = nb;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out.push(NeighborTerm {
                node: i,
                inflow: self.inflow(i, mask),
                age: self.age_mask(mask | 1 << i)?,
            });
        }
        Ok(out)
    }
}

/// Exact `v_S` of a connected set.
pub fn exact_version_age(g: &Graph, s: &NodeSet) -> Result<AgeResult> {
    ExactSolver::new(g)?.age(s)
}

/// Exact age of node 0, which on the vertex-transitive families is every
/// node's age.
pub fn exact_single_node(g: &Graph) -> Result<AgeResult> {
    exact_version_age(g, &NodeSet::singleton(g.n(), 0))
}

/// Exact ages of every connected set with at most `max_size` nodes,
/// ordered by size then mask.
pub fn exact_all_connected(g: &Graph, max_size: usize) -> Result<Vec<(NodeSet, f64)>> {
    let mut solver = ExactSolver::new(g)?;
    let mut masks: Vec<u64> = ConnectedSubsets::new(g, Enumeration::UpToSize(max_size))?.collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks
        .into_iter()
        .map(|m| {
            let v = solver.age_mask(m)?;
            Ok((NodeSet::from_mask(g.n(), m)?, v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::*;

    #[test]
    fn two_node_and_triangle() {
        let v = exact_single_node(&build_fully_connected(2).unwrap()).unwrap();
        assert!((v.value - 4.0 / 3.0).abs() < 1e-15);
        let v = exact_single_node(&build_ring(3, 1).unwrap()).unwrap();
        assert!((v.value - 33.0 / 20.0).abs() < 1e-15);
    }

    #[test]
    fn full_set_is_rate_ratio() {
        let g = GraphBuilder::new()
            .rates(Rates::new(2.0, 3.0).unwrap())
            .ring(7, 2)
            .unwrap();
        let v = exact_version_age(&g, &NodeSet::full(7)).unwrap();
        assert_eq!(v.value, 1.5);
    }

    #[test]
    fn rejects_disconnected_and_empty() {
        let g = build_ring(6, 1).unwrap();
        let s = NodeSet::from_indices(6, [0, 2]).unwrap();
        assert!(matches!(exact_version_age(&g, &s), Err(Error::Disconnected)));
        assert!(exact_version_age(&g, &NodeSet::empty(6)).is_err());
    }

    #[test]
    fn state_cap() {
        let g = build_grid(4, 4).unwrap();
        let mut solver = ExactSolver::new(&g).unwrap().with_max_states(100);
        assert!(matches!(
            solver.age(&NodeSet::singleton(16, 0)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn hypercube_two_is_four_cycle() {
        let a = exact_single_node(&build_unit_hypercube(2).unwrap()).unwrap().value;
        let b = exact_single_node(&build_ring(4, 1).unwrap()).unwrap().value;
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn all_connected_sorted() {
        let g = build_ring(4, 1).unwrap();
        let all = exact_all_connected(&g, 2).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0].0.len(), 1);
        assert_eq!(all[7].0.len(), 2);
    }
}
