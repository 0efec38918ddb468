#![allow(dead_code)]

use gossipage::Family;
use proptest::prelude::*;

/// Small instances of every family (at most 16 nodes), suitable for the
/// exact solver and exhaustive enumeration.
pub fn small_family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (3usize..=14)
            .prop_flat_map(|n| (Just(n), 1..=(n - 1) / 2))
            .prop_map(|(n, f)| Family::Ring { n, f }),
        (2usize..=4, 2usize..=4)
            .prop_filter("m >= k", |(m, k)| m >= k)
            .prop_map(|(m, k)| Family::Grid { m, k }),
        (1u32..=4).prop_map(|m| Family::UnitHypercube { m }),
        prop_oneof![Just((3usize, 1u32)), Just((4, 1)), Just((3, 2)), Just((4, 2))]
            .prop_map(|(m, d)| Family::TorusHypercube { m, d }),
        (2usize..=10).prop_map(|n| Family::FullyConnected { n }),
    ]
}

/// Larger instances for structural checks (no exhaustive work).
pub fn any_family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (3usize..=200)
            .prop_flat_map(|n| (Just(n), 1..=(n - 1) / 2))
            .prop_map(|(n, f)| Family::Ring { n, f }),
        (2usize..=20, 2usize..=20).prop_map(|(m, k)| Family::Grid {
            m: m.max(k),
            k: m.min(k)
        }),
        (1u32..=10).prop_map(|m| Family::UnitHypercube { m }),
        (3usize..=6, 1u32..=4).prop_map(|(m, d)| Family::TorusHypercube { m, d }),
        (2usize..=40).prop_map(|n| Family::FullyConnected { n }),
    ]
}

pub fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs())
}
