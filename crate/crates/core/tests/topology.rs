mod common;

use std::collections::BTreeMap;

use common::{any_family, close};
use gossipage::topology::{build_fully_connected, build_grid, build_ring, build_torus_hypercube, TORUS_MIN_SIDE};
use gossipage::{Error, Family, Graph, GraphBuilder, Rates, TopologyDescriptor};
use proptest::prelude::*;

fn link_map(g: &Graph) -> BTreeMap<(usize, usize), (u64, u32)> {
    let mut out = BTreeMap::new();
    for i in 0..g.n() {
        for l in g.out_links(i) {
            out.insert((i, l.node), ((l.rate * 1e12).round() as u64, l.slots));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_node_gossips_at_total_rate(family in any_family(), lambda in 0.1f64..10.0) {
        let g = GraphBuilder::new().rates(Rates::new(lambda, 1.0).unwrap()).build(family).unwrap();
        prop_assert_eq!(g.n(), family.node_count());
        for i in 0..g.n() {
            prop_assert!(close(g.out_rate(i), lambda, 1e-12));
        }
        prop_assert!(g.is_symmetric());
        prop_assert!(g.is_connected());
    }

    #[test]
    fn in_links_mirror_out_links(family in any_family()) {
        let g = GraphBuilder::new().build(family).unwrap();
        for i in 0..g.n() {
            for l in g.out_links(i) {
                prop_assert!(g.in_links(l.node).iter().any(|b| b.node == i && b.rate == l.rate));
                prop_assert_eq!(g.rate(i, l.node), l.rate);
            }
        }
    }
}

#[test]
fn two_dim_torus_is_the_square_grid() {
    for m in 3..=7 {
        assert_eq!(
            link_map(&build_torus_hypercube(m, 2).unwrap()),
            link_map(&build_grid(m, m).unwrap())
        );
    }
}

#[test]
fn widest_odd_ring_is_fully_connected() {
    for n in [3, 5, 7, 9, 11] {
        let ring = build_ring(n, (n - 1) / 2).unwrap();
        let full = build_fully_connected(n).unwrap();
        assert_eq!(link_map(&ring), link_map(&full));
    }
}

#[test]
fn thin_grid_merges_wrapped_edges() {
    // k = 2: up and down reach the same node, merged into one link of two slots.
    let g = build_grid(4, 2).unwrap();
    let down = g.out_links(0).iter().find(|l| l.node == 4).unwrap();
    assert_eq!(down.slots, 2);
    assert!(close(down.rate, 0.5, 1e-15));
    assert_eq!(g.slot_degree(0), 4);
    assert_eq!(g.degree(0), 3);
}

#[test]
fn ring_neighbors_are_the_nearest_on_each_side() {
    let g = build_ring(10, 2).unwrap();
    let mut nb: Vec<usize> = g.out_links(0).iter().map(|l| l.node).collect();
    nb.sort();
    assert_eq!(nb, vec![1, 2, 8, 9]);
    assert!(g.out_links(0).iter().all(|l| close(l.rate, 0.25, 1e-15)));
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(matches!(build_ring(10, 5), Err(Error::InvalidTopology(_))));
    assert!(matches!(build_ring(2, 1), Err(Error::InvalidTopology(_))));
    assert!(build_torus_hypercube(TORUS_MIN_SIDE - 1, 3).is_err());
    assert!(build_grid(1, 1).is_err());
    assert!(Rates::new(0.0, 1.0).is_err());
    assert!(Rates::new(1.0, -1.0).is_err());
    assert!(GraphBuilder::new().build(Family::Custom { n: 3 }).is_err());
}

#[test]
fn custom_graphs_from_links() {
    let path = [(0, 1, 1.0), (1, 0, 0.5), (1, 2, 0.5), (2, 1, 1.0)];
    let g = Graph::from_links(3, path, Rates::default()).unwrap();
    assert_eq!(g.family(), Family::Custom { n: 3 });
    // rates differ across the 0-1 link
    assert!(!g.is_symmetric());
    assert!(close(g.out_rate(1), 1.0, 1e-15));

    let split = [(0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, 1.0)];
    assert!(Graph::from_links(4, split, Rates::default()).is_err());
    assert!(Graph::from_links(2, [(0, 0, 1.0)], Rates::default()).is_err());
}

#[test]
fn descriptor_round_trips_through_json() {
    let d = TopologyDescriptor::new(Family::TorusHypercube { m: 4, d: 3 }, Rates::new(2.0, 0.5).unwrap());
    let json = serde_json::to_string(&d).unwrap();
    assert_eq!(
        json,
        r#"{"family":"torus_hypercube","params":{"m":4,"d":3},"lambda":2.0,"lambda_e":0.5}"#
    );
    assert_eq!(serde_json::from_str::<TopologyDescriptor>(&json).unwrap(), d);

    let bare: TopologyDescriptor = serde_json::from_str(r#"{"family":"ring","params":{"n":9,"f":2}}"#).unwrap();
    assert_eq!(bare.rates().unwrap(), Rates::default());
    assert_eq!(bare.build().unwrap().n(), 9);
}

#[test]
fn degree_histograms() {
    let g = build_torus_hypercube(5, 3).unwrap();
    assert_eq!(g.degree_histogram(), vec![(6, 125)]);
    assert_eq!(build_fully_connected(6).unwrap().degree_histogram(), vec![(5, 6)]);
}
