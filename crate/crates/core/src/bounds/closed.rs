use std::f64::consts::{LN_2, PI};

use crate::bounds::constants::{beta_prime, EULER_GAMMA};
use crate::error::{Error, Result};
use crate::topology::Rates;

/// Coefficient of `n^{1/3}` in the grid asymptotic bound.
pub const GRID_ASYMPTOTIC_COEFFICIENT: f64 = 3.764;

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive, got {x}")))
    }
}

/// Closed-form bound for the `m × k` torus grid.
pub fn grid_closed_form(m: usize, k: usize, rates: Rates) -> Result<f64> {
    if k < 2 || m < k {
        return Err(Error::param(format!("grid needs m >= k >= 2, got {m}x{k}")));
    }
    let (mf, kf) = (m as f64, k as f64);
    let body = 2.0
        + beta_prime() * (mf * kf).cbrt()
        + 2.0 * (2.0 * PI).sqrt() * (-kf * kf / (48.0 * mf)).exp() * mf.sqrt()
        + 8.0 * kf.sqrt();
    Ok(rates.ratio() * body)
}

/// `3.764 (λe/λ) n^{1/3}`.
pub fn grid_asymptotic(n: f64, rates: Rates) -> Result<f64> {
    positive("n", n)?;
    Ok(GRID_ASYMPTOTIC_COEFFICIENT * rates.ratio() * n.cbrt())
}

/// Closed-form bound for the generalized ring with real `f ≥ 1`.
pub fn ring_closed_form(n: f64, f: f64, rates: Rates) -> Result<f64> {
    positive("n", n)?;
    if !(f >= 1.0 && f.is_finite()) {
        return Err(Error::param(format!("f must be at least 1, got {f}")));
    }
    let r = rates.ratio();
    Ok(r * (5.0 + LN_2 + 2.0 * f.ln() + EULER_GAMMA) + PI.sqrt() * r * (n / f).sqrt())
}

/// `(λe/λ)(2 + ln(n-1))`.
pub fn fully_connected_closed_form(n: f64, rates: Rates) -> Result<f64> {
    if !(n >= 2.0 && n.is_finite()) {
        return Err(Error::param(format!("n must be at least 2, got {n}")));
    }
    Ok(rates.ratio() * (2.0 + (n - 1.0).ln()))
}

/// Leading term for a ring with a fixed `d` links per side.
pub fn fixed_d_ring_closed_form(n: f64, d: f64, rates: Rates) -> Result<f64> {
    positive("n", n)?;
    positive("d", d)?;
    Ok(PI.sqrt() * rates.ratio() * n.sqrt() / d.powf(1.5))
}

/// Leading term for a ring with `f = n^α`.
pub fn ring_alpha_closed_form(n: f64, alpha: f64, rates: Rates) -> Result<f64> {
    positive("n", n)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::param(format!("alpha must be in [0, 1), got {alpha}")));
    }
    Ok(PI.sqrt() * rates.ratio() * n.powf((1.0 - alpha) / 2.0))
}

/// Closed-form bound for the unit hypercube of dimension `m` (`n = 2^m`).
pub fn hypercube_closed_form(m: u32, rates: Rates) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("hypercube dimension must be at least 1"));
    }
    let mf = m as f64;
    Ok(rates.ratio() * (3.0 + 16.0 / 3.0 * mf + LN_2 * mf * mf.log2()))
}

/// Which pair of terms the crossover compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossoverTerms {
    /// `√π·√(n/f)` against `2 ln f`, the terms as they appear in the ring
    /// closed form.
    Weighted,
    /// `√(n/f)` against `ln f`.
    Bare,
}

/// Smallest `n` beyond which the rational term of the ring bound with
/// `f = n^α` is at least `factor` times the logarithmic one. Returns `0`
/// when the rational term dominates for every `n > 1`.
pub fn crossover_n(alpha: f64, factor: f64, terms: CrossoverTerms) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::param(format!("alpha must be in [0, 1), got {alpha}")));
    }
    positive("factor", factor)?;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let (lead, log_weight) = match terms {
        CrossoverTerms::Weighted => (PI.sqrt(), 2.0),
        CrossoverTerms::Bare => (1.0, 1.0),
    };
    // With x = ln n: g(x) = ln(lead) + (1-α)x/2 - ln(factor·weight·α·x),
    // convex with its minimum at x* = 2/(1-α).
    let g = |x: f64| lead.ln() + (1.0 - alpha) * x / 2.0 - (factor * log_weight * alpha * x).ln();
    let x_star = 2.0 / (1.0 - alpha);
    if g(x_star) >= 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (x_star, 2.0 * x_star);
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi.exp())
}
