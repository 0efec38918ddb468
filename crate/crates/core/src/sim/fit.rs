use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares power law `v ≈ coefficient · n^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
}

/// Fits `ln v` against `ln n`. Needs three or more points with distinct,
/// positive `n` and positive `v`.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::param(format!(
            "scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(n, v)| !(n > 0.0 && v > 0.0 && n.is_finite() && v.is_finite()))
    {
        return Err(Error::param("scaling fit needs positive finite n and v"));
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::param("scaling fit needs distinct n"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ScalingFit {
        exponent: slope,
        coefficient: intercept.exp(),
        r_squared,
    })
}
