use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{min_incoming_by_size, min_incoming_formula, BoundForm};
use crate::topology::Graph;

/// Formula bound against the exhaustive minimum at one set size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalRow {
    pub family: String,
    pub params: String,
    pub j: usize,
    pub formula_bound: f64,
    pub bruteforce_min: usize,
    /// Members of a minimizing set, `;`-separated.
    pub witness: String,
    pub conjecture: bool,
}

impl ExtremalRow {
    /// The formula is a valid lower bound at this size.
    pub fn holds(&self) -> bool {
        self.formula_bound <= self.bruteforce_min as f64
    }
}

/// Compares the incoming-edge formula with exhaustive minima for
/// `j_min..=j_max`.
pub fn verify_extremal(g: &Graph, j_min: usize, j_max: usize, form: BoundForm) -> Result<Vec<ExtremalRow>> {
    if j_min == 0 || j_min > j_max || j_max > g.n() {
        return Err(Error::param(format!(
            "need 1 <= j_min <= j_max <= {}, got {j_min}..={j_max}",
            g.n()
        )));
    }
    let family = g.family();
    min_incoming_by_size(g, j_max)?
        .into_iter()
        .filter(|e| e.size >= j_min)
        .map(|e| {
            let bound = min_incoming_formula(family, e.size, form)?;
            Ok(ExtremalRow {
                family: family.name().to_string(),
                params: family.params(),
                j: e.size,
                formula_bound: bound.value,
                bruteforce_min: e.count,
                witness: e.witness.to_list_string(),
                conjecture: bound.conjecture,
            })
        })
        .collect()
}
