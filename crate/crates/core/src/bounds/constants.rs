use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const QUAD_TOL: f64 = 1e-13;
const QUAD_MAX_DEPTH: u32 = 60;

/// Adaptive Simpson quadrature of `f` on `[lo, hi]` to absolute tolerance
/// `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    struct Seg {
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    }
    let (fa, fb) = (f(lo), f(hi));
    let fm = f(0.5 * (lo + hi));
    let mut stack = vec![Seg {
        a: lo,
        b: hi,
        fa,
        fm,
        fb,
        whole: simpson(fa, fm, fb, lo, hi),
        tol,
        depth: 0,
    }];
    let mut total = 0.0;
    while let Some(s) = stack.pop() {
        let m = 0.5 * (s.a + s.b);
        let (lm, rm) = (f(0.5 * (s.a + m)), f(0.5 * (m + s.b)));
        let left = simpson(s.fa, lm, s.fm, s.a, m);
        let right = simpson(s.fm, rm, s.fb, m, s.b);
        let diff = left + right - s.whole;
        if diff.abs() <= 15.0 * s.tol && s.depth >= 4 {
            total += left + right + diff / 15.0;
        } else if s.depth >= QUAD_MAX_DEPTH {
            return Err(Error::Quadrature { lo, hi, tolerance: tol });
        } else {
            let depth = s.depth + 1;
            stack.push(Seg {
                a: s.a,
                b: m,
                fa: s.fa,
                fm: lm,
                fb: s.fm,
                whole: left,
                tol: 0.5 * s.tol,
                depth,
            });
            stack.push(Seg {
                a: m,
                b: s.b,
                fa: s.fm,
                fm: rm,
                fb: s.fb,
                whole: right,
                tol: 0.5 * s.tol,
                depth,
            });
        }
    }
    Ok(total)
}

/// Constants appearing in the closed-form bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub gamma: f64,
    /// `∫₀^∞ t^{-1/2} e^{-(2/3)t^{3/2}} dt` by quadrature.
    pub beta_quadrature: f64,
    /// The same integral as `(2/3)^{2/3} Γ(1/3)`.
    pub beta_closed: f64,
    /// `e^{-γ/2} e^{π²/48} β`.
    pub beta_prime: f64,
    /// `π²/48`.
    pub delta: f64,
}

impl Constants {
    pub fn beta(&self) -> f64 {
        self.beta_closed
    }
}

/// Evaluates the constants, computing `β` two independent ways.
pub fn compute_constants() -> Result<Constants> {
    let beta_quadrature = power_tail_integral(2.0)?;
    let beta_closed = (2.0f64 / 3.0).powf(2.0 / 3.0) * gamma(1.0 / 3.0);
    let delta = std::f64::consts::PI.powi(2) / 48.0;
    Ok(Constants {
        gamma: EULER_GAMMA,
        beta_quadrature,
        beta_closed,
        beta_prime: (-EULER_GAMMA / 2.0).exp() * delta.exp() * beta_closed,
        delta,
    })
}

/// `β′` from the closed form of `β`.
pub fn beta_prime() -> f64 {
    let beta = (2.0f64 / 3.0).powf(2.0 / 3.0) * gamma(1.0 / 3.0);
    (-EULER_GAMMA / 2.0).exp() * (std::f64::consts::PI.powi(2) / 48.0).exp() * beta
}

/// `∫₀^∞ d·e^{-(d/(d+1)) u^{d+1}} du` by quadrature. For `d = 2` this is
/// `β` after substituting `t = u²`.
fn power_tail_integral(d: f64) -> Result<f64> {
    let c = d / (d + 1.0);
    // c·U^{d+1} = 80 leaves a tail far below double precision.
    let upper = (80.0 / c).powf(1.0 / (d + 1.0));
    adaptive_simpson(|u| d * (-c * u.powf(d + 1.0)).exp(), 0.0, upper, QUAD_TOL)
}

/// Per-dimension analogues for the `d`-dimensional torus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DimConstants {
    pub d: u32,
    /// `L_d` by quadrature.
    pub l_quadrature: f64,
    /// `L_d = d Γ(1/(d+1)) / ((d+1) c^{1/(d+1)})`, `c = d/(d+1)`.
    pub l_closed: f64,
    /// `C_d = (d-1)π² / (6d²)`.
    pub c: f64,
}

pub fn ddim_constants(d: u32) -> Result<DimConstants> {
    if d < 2 {
        return Err(Error::param(format!("dimension must be at least 2, got {d}")));
    }
    let df = d as f64;
    let c = df / (df + 1.0);
    Ok(DimConstants {
        d,
        l_quadrature: power_tail_integral(df)?,
        l_closed: df * gamma(1.0 / (df + 1.0)) / ((df + 1.0) * c.powf(1.0 / (df + 1.0))),
        c: (df - 1.0) * std::f64::consts::PI.powi(2) / (6.0 * df * df),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_gamma_from_harmonic_numbers() {
        let n = 100_000.0f64;
        let h: f64 = (1..=100_000).rev().map(|i| 1.0 / i as f64).sum();
        let approx = h - n.ln() - 1.0 / (2.0 * n) + 1.0 / (12.0 * n * n);
        assert!((approx - EULER_GAMMA).abs() < 1e-12);
    }

    #[test]
    fn beta_two_ways() {
        let c = compute_constants().unwrap();
        assert!((c.beta_quadrature - c.beta_closed).abs() < 1e-8);
        assert!((c.beta_closed - 2.044_412_730).abs() < 1e-8);
        assert!((c.beta_prime - 1.882).abs() < 1e-3);
        assert_eq!(c.beta_prime, beta_prime());
    }

    #[test]
    fn dimension_constants() {
        let two = ddim_constants(2).unwrap();
        assert!((two.l_closed - compute_constants().unwrap().beta_closed).abs() < 1e-12);
        for d in 2..=6 {
            let k = ddim_constants(d).unwrap();
            assert!((k.l_quadrature - k.l_closed).abs() < 1e-8, "d={d}");
        }
        assert!(ddim_constants(1).is_err());
    }

    #[test]
    fn simpson_polynomial() {
        let v = adaptive_simpson(|x| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }
}
