use gossipage::exact::exact_single_node;
use gossipage::sim::{fit_scaling, mean_ci, simulate, Estimator, SimConfig};
use gossipage::topology::{build_fully_connected, build_grid, build_ring, build_unit_hypercube};
use gossipage::{AgeKind, Family, GraphBuilder, Rates};

#[test]
fn same_seed_same_result() {
    let g = build_grid(5, 4).unwrap();
    let cfg = SimConfig::with_horizon(500.0, 4, 99);
    let a = simulate(&g, &cfg).unwrap();
    let b = simulate(&g, &cfg).unwrap();
    assert_eq!(a, b);
    let c = simulate(&g, &SimConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a.result.value, c.result.value);
    assert_eq!(a.result.kind, AgeKind::Simulated);
    assert_eq!(a.result.provenance.seed, Some(99));
}

#[test]
fn agrees_with_exact_on_small_graphs() {
    for g in [
        build_fully_connected(4).unwrap(),
        build_ring(9, 1).unwrap(),
        build_grid(3, 3).unwrap(),
        build_unit_hypercube(3).unwrap(),
    ] {
        let exact = exact_single_node(&g).unwrap().value;
        let r = simulate(&g, &SimConfig::with_horizon(4000.0, 8, 3)).unwrap();
        let ci = r.result.ci_halfwidth.unwrap();
        assert!(
            (r.result.value - exact).abs() <= 4.0 * ci,
            "{}: {} ± {ci} vs {exact}",
            g.family(),
            r.result.value
        );
    }
}

#[test]
fn single_node_estimator_matches_pooled() {
    let g = build_ring(12, 2).unwrap();
    let exact = exact_single_node(&g).unwrap().value;
    let cfg = SimConfig {
        estimator: Estimator::SingleNode,
        anchor: 5,
        ..SimConfig::with_horizon(8000.0, 8, 4)
    };
    let r = simulate(&g, &cfg).unwrap();
    assert!((r.result.value - exact).abs() <= 4.0 * r.result.ci_halfwidth.unwrap());
}

#[test]
fn per_node_ages_average_to_the_pooled_mean() {
    let g = build_grid(4, 4).unwrap();
    let cfg = SimConfig {
        per_node: true,
        ..SimConfig::with_horizon(2000.0, 4, 8)
    };
    let r = simulate(&g, &cfg).unwrap();
    let ages = r.per_node.unwrap();
    assert_eq!(ages.len(), 16);
    let mean = ages.iter().sum::<f64>() / 16.0;
    assert!((mean - r.result.value).abs() <= 1e-9 * mean);
}

#[test]
fn event_rates() {
    let rates = Rates::new(2.0, 0.5).unwrap();
    let g = GraphBuilder::new()
        .rates(rates)
        .build(Family::Ring { n: 20, f: 2 })
        .unwrap();
    let (horizon, reps) = (5000.0, 4);
    let r = simulate(&g, &SimConfig::with_horizon(horizon, reps, 1)).unwrap();
    let time = horizon * reps as f64;
    let within = |count: u64, rate: f64| {
        let expect = rate * time;
        (count as f64 - expect).abs() <= 5.0 * expect.sqrt()
    };
    assert!(within(r.events.self_updates, 0.5));
    assert!(within(r.events.source_pushes, 2.0));
    assert!(within(r.events.gossips, 20.0 * 2.0));
}

#[test]
fn wider_ring_is_fresher() {
    let cfg = SimConfig::with_horizon(3000.0, 4, 6);
    for n in [256, 512] {
        let one = simulate(&build_ring(n, 1).unwrap(), &cfg).unwrap().result;
        let two = simulate(&build_ring(n, 2).unwrap(), &cfg).unwrap().result;
        assert!(
            two.value + two.ci_halfwidth.unwrap() < one.value - one.ci_halfwidth.unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn zero_source_rate_means_zero_age() {
    let g = GraphBuilder::new()
        .rates(Rates::new(1.0, 0.0).unwrap())
        .build(Family::Ring { n: 6, f: 1 })
        .unwrap();
    let r = simulate(&g, &SimConfig::with_horizon(100.0, 2, 0)).unwrap();
    assert_eq!(r.result.value, 0.0);
    assert_eq!(r.events.self_updates, 0);
}

#[test]
fn config_validation() {
    let g = build_ring(6, 1).unwrap();
    let bad = [
        SimConfig::with_horizon(0.0, 2, 0),
        SimConfig {
            warmup: Some(10.0),
            ..SimConfig::with_horizon(10.0, 2, 0)
        },
        SimConfig::with_horizon(10.0, 0, 0),
        SimConfig::with_horizon(10.0, 1, 0),
        SimConfig {
            anchor: 6,
            ..SimConfig::with_horizon(10.0, 2, 0)
        },
    ];
    for cfg in bad {
        assert!(simulate(&g, &cfg).is_err(), "{cfg:?}");
    }
    let single = SimConfig {
        confidence_interval: false,
        ..SimConfig::with_horizon(10.0, 1, 0)
    };
    assert!(simulate(&g, &single).unwrap().result.ci_halfwidth.is_none());
    let (h, w) = SimConfig::default().resolve(&g).unwrap();
    assert_eq!((h, w), (1e5, 2e4));
}

#[test]
fn config_json() {
    let cfg: SimConfig = serde_json::from_str(r#"{"horizon": 50, "replications": 3, "seed": 2}"#).unwrap();
    assert_eq!(cfg, SimConfig::with_horizon(50.0, 3, 2));
    assert!(serde_json::from_str::<SimConfig>(r#"{"horizn": 50}"#).is_err());
}

#[test]
fn confidence_intervals() {
    let (m, ci) = mean_ci(&[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(m, 2.5);
    let sd = (5.0f64 / 3.0).sqrt();
    assert!((ci.unwrap() - 1.96 * sd / 2.0).abs() < 1e-12);
    assert_eq!(mean_ci(&[7.0]), (7.0, None));
}

#[test]
fn power_law_fit() {
    let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0, 10000.0]
        .iter()
        .map(|&n: &f64| (n, 3.0 * n.powf(0.4)))
        .collect();
    let fit = fit_scaling(&pts).unwrap();
    assert!((fit.exponent - 0.4).abs() < 1e-12);
    assert!((fit.coefficient - 3.0).abs() < 1e-9);
    assert!((fit.r_squared - 1.0).abs() < 1e-12);
    assert!(fit_scaling(&pts[..2]).is_err());
    assert!(fit_scaling(&[(1.0, 1.0), (1.0, 2.0), (2.0, 3.0)]).is_err());
}
