use gossipage::bounds::{bound_chain, evaluate_chain, BoundChain, ChainStep};
use gossipage::harness::{
    crosscheck, crosscheck_with, parse_specs, read_csv, run, run_with, verify_extremal, write_csv, ExperimentSpec,
};
use gossipage::subset::BoundForm;
use gossipage::topology::build_grid;
use gossipage::{Family, Rates, Result};

/// Ring chain rebuilt step by step, with the middle-regime coefficient
/// multiplied by `mid_scale`.
fn ring_chain(n: usize, f: usize, rates: Rates, mid_scale: f64) -> Result<BoundChain> {
    let arc = |j: usize| (2 * j * f - j * (j - 1)) as f64 / (2 * f) as f64;
    evaluate_chain(Family::Ring { n, f }, n, rates, vec![f, n - f - 1], false, |j| {
        ChainStep {
            numerator: rates.ratio(),
            coefficient: if j <= f {
                arc(j)
            } else if j < n - f {
                mid_scale * (f + 1) as f64 / 2.0
            } else {
                arc(n - j)
            },
        }
    })
}

fn corrupted(family: Family, rates: Rates) -> Result<BoundChain> {
    match family {
        Family::Ring { n, f } => ring_chain(n, f, rates, 2.0),
        other => bound_chain(other, rates),
    }
}

fn spec(text: &str) -> ExperimentSpec {
    parse_specs(text).unwrap().remove(0)
}

const SMALL_RING: &str = r#"{
    "name": "ring_control",
    "family": "ring",
    "sweep": {"n": [8, 10, 12], "f": [1, 2, 3]},
    "methods": ["exact", "simulate", "chain", "closed_form"],
    "sim": {"horizon": 2000, "replications": 8, "seed": 3},
    "crosscheck_seeds": 20
}"#;

#[test]
fn rebuilt_ring_chain_matches_library() {
    let r = Rates::new(1.0, 2.0).unwrap();
    for (n, f) in [(10, 1), (10, 2), (40, 5), (101, 7)] {
        let mine = ring_chain(n, f, r, 1.0).unwrap();
        let lib = bound_chain(Family::Ring { n, f }, r).unwrap();
        assert!((mine.v1 - lib.v1).abs() <= 1e-12 * lib.v1, "n={n} f={f}");
    }
}

#[test]
fn crosscheck_passes_on_small_rings() {
    let report = crosscheck(&spec(SMALL_RING)).unwrap();
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    assert_eq!(report.checks.len(), 9 * 4);
}

#[test]
fn corrupted_chain_is_caught() {
    let s = spec(SMALL_RING);
    let report = crosscheck_with(&s, &corrupted).unwrap();
    let failed: Vec<_> = report.failures().map(|c| (c.params.clone(), c.check.clone())).collect();
    assert!(
        failed.iter().any(|(p, c)| p == "n=10;f=2" && c == "exact<=chain"),
        "{failed:?}"
    );
    assert!(failed.iter().filter(|(_, c)| c == "exact<=chain").count() >= 4);

    let rows = run_with(&s, &corrupted).unwrap();
    assert!(rows.iter().any(|r| r.method == "chain" && r.sound == Some(false)));
    assert!(run(&s).unwrap().iter().all(|r| r.sound != Some(false)));
}

#[test]
fn runs_are_deterministic() {
    let s = spec(SMALL_RING);
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_csv(&mut a, &run(&s).unwrap(), true).unwrap();
    write_csv(&mut b, &run(&s).unwrap(), true).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(
        "# schema=1\nexperiment,family,params,n,method,value,ci95,seed,horizon,replications,conjecture,sound,error\n"
    ));
}

#[test]
fn csv_round_trip() {
    let rows = run(&spec(SMALL_RING)).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows, false).unwrap();
    assert!(String::from_utf8_lossy(&buf).contains("# generated_unix="));
    assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
}

#[test]
fn sweep_expansion() {
    let grid = spec(r#"{"name": "g", "family": "grid", "sweep": {"n": [12, 18], "k": [2, 3]}, "methods": ["chain"]}"#);
    let fams: Vec<Family> = grid.points().unwrap().iter().map(|p| p.family).collect();
    assert_eq!(
        fams,
        vec![
            Family::Grid { m: 6, k: 2 },
            Family::Grid { m: 9, k: 2 },
            Family::Grid { m: 4, k: 3 },
            Family::Grid { m: 6, k: 3 }
        ]
    );

    let half = spec(
        r#"{"name": "h", "family": "grid", "sweep": {"m": {"start": 4, "stop": 8, "step": 2}, "ratio": 2}, "methods": ["chain"]}"#,
    );
    assert_eq!(half.points().unwrap().len(), 3);
    assert_eq!(half.points().unwrap()[2].family, Family::Grid { m: 8, k: 4 });

    let alpha = spec(
        r#"{"name": "a", "family": "ring", "sweep": {"n": [100000], "alpha": {"start": 0.1, "stop": 0.3, "step": 0.1}},
            "methods": ["chain"], "f_convention": "floor"}"#,
    );
    let pts = alpha.points().unwrap();
    assert_eq!(pts.len(), 3);
    assert_eq!(pts[1].family, Family::Ring { n: 100_000, f: 10 });
    assert_eq!(pts[1].params(), "n=100000;f=10;alpha=0.2");
}

#[test]
fn invalid_specs() {
    let bad = [
        r#"{"name": "x", "family": "ring", "sweep": {"n": [10]}, "methods": []}"#,
        r#"{"name": "x", "family": "ring", "sweep": {"n": [10], "f": [1], "alpha": [0.1]}, "methods": ["chain"]}"#,
        r#"{"name": "x", "family": "ring", "sweep": {"n": [10]}, "methods": ["chain"], "colour": 1}"#,
        r#"{"name": "x", "family": "grid", "sweep": {"m": [4]}, "methods": ["chain"]}"#,
        r#"{"name": "x", "family": "ring", "sweep": {"n": [10]}, "methods": ["guess"]}"#,
        r#"{"name": "x", "family": "ring", "sweep": {"n": [10]}, "methods": ["chain"], "lambda": 0}"#,
        r#"{"name": "", "family": "ring", "sweep": {"n": [10]}, "methods": ["chain"]}"#,
    ];
    for text in bad {
        assert!(parse_specs(text).is_err(), "{text}");
    }
}

#[test]
fn bad_points_become_row_errors() {
    let s = spec(r#"{"name": "x", "family": "ring", "sweep": {"n": [10], "f": [1, 7]}, "methods": ["chain"]}"#);
    let rows = run(&s).unwrap();
    assert!(rows[0].error.is_none());
    assert!(rows[1].error.as_deref().unwrap().contains("f=7"));
}

#[test]
fn spec_arrays() {
    let text = format!("[{SMALL_RING}, {}]", SMALL_RING.replace("ring_control", "again"));
    assert_eq!(parse_specs(&text).unwrap().len(), 2);
}

#[test]
fn extremal_rows() {
    let rows = verify_extremal(&build_grid(5, 5).unwrap(), 2, 9, BoundForm::Tight).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.holds()));
    assert_eq!(rows[7].j, 9);
    assert!(verify_extremal(&build_grid(5, 5).unwrap(), 3, 2, BoundForm::Tight).is_err());
}

#[test]
fn shipped_specs_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/experiments");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let specs = gossipage::harness::load_specs(&path).unwrap();
        assert!(!specs.is_empty(), "{}", path.display());
        count += 1;
    }
    assert_eq!(count, 9);
}
