use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{ring_alpha_f, FConvention};
use crate::error::{Error, Result};
use crate::sim::SimConfig;
use crate::topology::{Family, Rates};

/// Topology family of an experiment, without parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Ring,
    Grid,
    UnitHypercube,
    TorusHypercube,
    FullyConnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Simulate,
    Chain,
    ClosedForm,
    /// Leading-order form: `3.764 n^{1/3}` for grids, the `n^α` or fixed-`f`
    /// ring forms.
    Asymptotic,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Simulate => "simulate",
            Method::Chain => "chain",
            Method::ClosedForm => "closed_form",
            Method::Asymptotic => "asymptotic",
        }
    }

    pub fn is_bound(&self) -> bool {
        matches!(self, Method::Chain | Method::ClosedForm | Method::Asymptotic)
    }
}

/// A list of values, or an inclusive `start..=stop` range with `step`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values<T> {
    List(Vec<T>),
    Range { start: T, stop: T, step: T },
}

impl Values<usize> {
    pub fn expand(&self) -> Result<Vec<usize>> {
        match *self {
            Values::List(ref v) => Ok(v.clone()),
            Values::Range { start, stop, step } => {
                if step == 0 {
                    return Err(Error::Config("range step must be positive".into()));
                }
                Ok((start..=stop).step_by(step).collect())
            }
        }
    }
}

impl Values<u32> {
    pub fn expand(&self) -> Result<Vec<u32>> {
        match *self {
            Values::List(ref v) => Ok(v.clone()),
            Values::Range { start, stop, step } => {
                if step == 0 {
                    return Err(Error::Config("range step must be positive".into()));
                }
                Ok((start..=stop).step_by(step as usize).collect())
            }
        }
    }
}

impl Values<f64> {
    /// Range points are `start + i·step`, rounded to 12 decimals.
    pub fn expand(&self) -> Result<Vec<f64>> {
        match *self {
            Values::List(ref v) => Ok(v.clone()),
            Values::Range { start, stop, step } => {
                if step.is_nan() || step <= 0.0 {
                    return Err(Error::Config("range step must be positive".into()));
                }
                let count = ((stop - start) / step + 1e-9).floor();
                if count.is_nan() || count < 0.0 {
                    return Ok(Vec::new());
                }
                Ok((0..=count as usize)
                    .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                    .collect())
            }
        }
    }
}

/// Parameter sweep; which fields are needed depends on the family.
///
/// * ring: `n`, and either `f` (default `[1]`) or `alpha`
/// * grid: `m` with `square` or `ratio`, `n` with `k` (then `m = n/k`), or
///   `m` with `k`
/// * unit hypercube: `m`
/// * torus hypercube: `m` and `d`
/// * fully connected: `n`
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub n: Option<Values<usize>>,
    pub m: Option<Values<usize>>,
    pub k: Option<Values<usize>>,
    pub f: Option<Values<usize>>,
    pub alpha: Option<Values<f64>>,
    pub d: Option<Values<u32>>,
    /// Grids only: use `k = m`.
    pub square: bool,
    /// Grids only: use `k = m / ratio`.
    pub ratio: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn default_slack() -> f64 {
    2.0
}

fn default_seeds() -> usize {
    20
}

/// Declarative experiment: a family, a sweep, and the methods to run at
/// every sweep point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub family: FamilyKind,
    #[serde(default)]
    pub sweep: Sweep,
    pub methods: Vec<Method>,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "one")]
    pub lambda_e: f64,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default)]
    pub f_convention: FConvention,
    /// Allowed ratio of chain to closed form in cross-checks.
    #[serde(default = "default_slack")]
    pub closed_form_slack: f64,
    /// Seeds used for the simulated-vs-exact agreement check.
    #[serde(default = "default_seeds")]
    pub crosscheck_seeds: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// One sweep point: a concrete family, plus `α` when `f` came from `n^α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub family: Family,
    pub alpha: Option<f64>,
}

impl Point {
    pub fn params(&self) -> String {
        match self.alpha {
            Some(a) => format!("{};alpha={a}", self.family.params()),
            None => self.family.params(),
        }
    }
}

impl ExperimentSpec {
    pub fn rates(&self) -> Result<Rates> {
        Rates::new(self.lambda, self.lambda_e)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Config("experiment name is empty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config(format!("{}: no methods selected", self.name)));
        }
        if self.closed_form_slack.is_nan() || self.closed_form_slack <= 0.0 {
            return Err(Error::Config(format!(
                "{}: closed_form_slack must be positive",
                self.name
            )));
        }
        self.rates()?;
        self.points()?;
        Ok(())
    }

    fn need<'a, T>(&self, v: &'a Option<Values<T>>, field: &str) -> Result<&'a Values<T>> {
        v.as_ref().ok_or_else(|| {
            Error::Config(format!(
                "{}: sweep.{field} is required for {:?}",
                self.name, self.family
            ))
        })
    }

    /// Sweep points in declaration order. Parameter combinations that fail
    /// family validation still yield points; they surface as row errors.
    pub fn points(&self) -> Result<Vec<Point>> {
        let s = &self.sweep;
        let plain = |family| Point { family, alpha: None };
        let mut out = Vec::new();
        match self.family {
            FamilyKind::Ring => {
                let ns = self.need(&s.n, "n")?.expand()?;
                match (&s.f, &s.alpha) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Config(format!(
                            "{}: give either sweep.f or sweep.alpha",
                            self.name
                        )));
                    }
                    (_, Some(alpha)) => {
                        let alphas = alpha.expand()?;
                        for &n in &ns {
                            for &a in &alphas {
                                let f = ring_alpha_f(n, a, self.f_convention).unwrap_or(0);
                                out.push(Point {
                                    family: Family::Ring { n, f },
                                    alpha: Some(a),
                                });
                            }
                        }
                    }
                    (f, None) => {
                        let fs = match f {
                            Some(f) => f.expand()?,
                            None => vec![1],
                        };
                        for &n in &ns {
                            for &f in &fs {
                                out.push(plain(Family::Ring { n, f }));
                            }
                        }
                    }
                }
            }
            FamilyKind::Grid => {
                if let Some(ratio) = s.ratio {
                    if ratio == 0 {
                        return Err(Error::Config(format!("{}: sweep.ratio must be positive", self.name)));
                    }
                    for m in self.need(&s.m, "m")?.expand()? {
                        out.push(plain(Family::Grid { m, k: m / ratio }));
                    }
                } else if s.square {
                    for m in self.need(&s.m, "m")?.expand()? {
                        out.push(plain(Family::Grid { m, k: m }));
                    }
                } else if s.n.is_some() {
                    let ks = self.need(&s.k, "k")?.expand()?;
                    for &k in &ks {
                        for n in self.need(&s.n, "n")?.expand()? {
                            let m = if k > 0 && n % k == 0 { n / k } else { 0 };
                            out.push(plain(Family::Grid { m, k }));
                        }
                    }
                } else {
                    let ms = self.need(&s.m, "m")?.expand()?;
                    let ks = self.need(&s.k, "k")?.expand()?;
                    for &m in &ms {
                        for &k in &ks {
                            out.push(plain(Family::Grid { m, k }));
                        }
                    }
                }
            }
            FamilyKind::UnitHypercube => {
                for m in self.need(&s.m, "m")?.expand()? {
                    let m = u32::try_from(m).map_err(|_| Error::Config(format!("hypercube m={m} too large")))?;
                    out.push(plain(Family::UnitHypercube { m }));
                }
            }
            FamilyKind::TorusHypercube => {
                let ms = self.need(&s.m, "m")?.expand()?;
                let ds = self.need(&s.d, "d")?.expand()?;
                for &m in &ms {
                    for &d in &ds {
                        out.push(plain(Family::TorusHypercube { m, d }));
                    }
                }
            }
            FamilyKind::FullyConnected => {
                for n in self.need(&s.n, "n")?.expand()? {
                    out.push(plain(Family::FullyConnected { n }));
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Config(format!("{}: sweep is empty", self.name)));
        }
        Ok(out)
    }
}

/// Parses one spec or an array of specs.
pub fn parse_specs(text: &str) -> Result<Vec<ExperimentSpec>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let specs = match value {
        serde_json::Value::Array(_) => serde_json::from_value::<Vec<ExperimentSpec>>(value)?,
        _ => vec![serde_json::from_value::<ExperimentSpec>(value)?],
    };
    for s in &specs {
        s.validate()?;
    }
    Ok(specs)
}

/// Loads specs from a JSON file.
pub fn load_specs(path: &Path) -> Result<Vec<ExperimentSpec>> {
    parse_specs(&std::fs::read_to_string(path)?)
}
