//! Upper bounds on version age: the single-step bounds, the piecewise
//! recursive chains, and the closed forms.

mod chains;
mod closed;
mod constants;

pub use chains::*;
pub use closed::*;
pub use constants::*;

use crate::error::{Error, Result};

/// Single-step upper bound on `v_S` given every neighbor's inflow is at
/// least `min_rate` and every `v_{S∪{i}}` is at most `v_next`.
pub fn lemma1_step(lambda_e: f64, lambda0: f64, neighbors: usize, min_rate: f64, v_next: f64) -> Result<f64> {
    step(lambda_e, lambda0, neighbors, min_rate, v_next)
}

/// Single-step lower bound on `v_S` given every neighbor's inflow is at
/// most `max_rate` and every `v_{S∪{i}}` is at least `v_next`.
pub fn lemma2_step(lambda_e: f64, lambda0: f64, neighbors: usize, max_rate: f64, v_next: f64) -> Result<f64> {
    step(lambda_e, lambda0, neighbors, max_rate, v_next)
}

fn step(lambda_e: f64, lambda0: f64, neighbors: usize, rate: f64, v_next: f64) -> Result<f64> {
    if lambda_e < 0.0 || lambda0 < 0.0 || rate < 0.0 {
        return Err(Error::param("rates must be non-negative"));
    }
    let spread = neighbors as f64 * rate;
    let den = lambda0 + spread;
    if den <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok((lambda_e + spread * v_next) / den)
}
