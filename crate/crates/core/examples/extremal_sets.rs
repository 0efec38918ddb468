//! Minimum incoming-edge sets: spiral witnesses, formula checks, Hart sums.

use gossipage::harness::verify_extremal;
use gossipage::subset::{edge_counts, grid_spiral, hart_sum, min_incoming_bruteforce, BoundForm};
use gossipage::topology::{build_grid, build_torus_hypercube, build_unit_hypercube};

fn main() -> gossipage::Result<()> {
    let grid = build_grid(6, 6)?;
    let spiral = grid_spiral(6, 6, 9, (1, 1))?;
    let counts = edge_counts(&grid, &spiral)?;
    println!(
        "spiral of 9 on 6x6: {{{}}} incoming {}",
        spiral.to_list_string(),
        counts.incoming
    );

    println!("grid 6x6, j = 1..10:");
    for row in verify_extremal(&grid, 1, 10, BoundForm::Tight)? {
        println!(
            "  j={:<2} formula {:>4} min {:>3} witness {{{}}}",
            row.j, row.formula_bound, row.bruteforce_min, row.witness
        );
    }

    let cube = build_unit_hypercube(4)?;
    for j in [2, 4, 8] {
        let e = min_incoming_bruteforce(&cube, j)?;
        let inner = (4 * j - e.count) / 2;
        println!(
            "cube m=4, j={j}: min incoming {} inner {inner} hart sum {}",
            e.count,
            hart_sum(j as u64)
        );
    }

    let torus = build_torus_hypercube(3, 3)?;
    for row in verify_extremal(&torus, 1, 6, BoundForm::Tight)? {
        println!(
            "torus d=3 m=3 j={}: formula {} min {} conjecture={}",
            row.j, row.formula_bound, row.bruteforce_min, row.conjecture
        );
    }
    Ok(())
}
