use serde::Serialize;

/// How an [`AgeResult`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AgeKind {
    Exact,
    Simulated,
    BoundUpper,
    BoundLower,
}

/// Metadata carried with an age value.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Provenance {
    /// The value rests on a conjectured edge bound.
    pub conjecture: bool,
    pub seed: Option<u64>,
    pub horizon: Option<f64>,
    pub replications: Option<usize>,
    /// Memoized subsets visited by the exact solver.
    pub states: Option<usize>,
}

/// A version-age value with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgeResult {
    pub value: f64,
    pub kind: AgeKind,
    /// 95% half-width, simulated results only.
    pub ci_halfwidth: Option<f64>,
    pub provenance: Provenance,
}

impl AgeResult {
    pub fn exact(value: f64, states: usize) -> Self {
        AgeResult {
            value,
            kind: AgeKind::Exact,
            ci_halfwidth: None,
            provenance: Provenance {
                states: Some(states),
                ..Provenance::default()
            },
        }
    }

    pub fn bound_upper(value: f64, conjecture: bool) -> Self {
        AgeResult {
            value,
            kind: AgeKind::BoundUpper,
            ci_halfwidth: None,
            provenance: Provenance {
                conjecture,
                ..Provenance::default()
            },
        }
    }
}
