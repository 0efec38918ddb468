//! Exact version ages on small networks, from single nodes up to the full set.

use gossipage::exact::{exact_all_connected, exact_single_node, ExactSolver};
use gossipage::topology::{build_fully_connected, build_ring, build_unit_hypercube};
use gossipage::NodeSet;

fn main() -> gossipage::Result<()> {
    let pair = build_fully_connected(2)?;
    println!("fully connected n=2: v1 = {}", exact_single_node(&pair)?.value);

    let triangle = build_ring(3, 1)?;
    println!("ring n=3 f=1:        v1 = {}", exact_single_node(&triangle)?.value);

    let cube = build_unit_hypercube(3)?;
    let mut solver = ExactSolver::new(&cube)?;
    let v1 = solver.age(&NodeSet::singleton(8, 0))?;
    println!("cube m=3: v1 = {:.6} ({} states)", v1.value, solver.states());
    println!("  full set: {}", solver.age(&NodeSet::full(8))?.value);
    for t in solver.neighbor_terms(&NodeSet::singleton(8, 0))? {
        println!("  grow by node {}: inflow {:.3}, age {:.6}", t.node, t.inflow, t.age);
    }

    let ring = build_ring(8, 1)?;
    println!("ring n=8 f=1, connected sets up to size 3:");
    for (set, age) in exact_all_connected(&ring, 3)?.into_iter().take(12) {
        println!("  {{{}}} -> {age:.6}", set.to_list_string());
    }
    Ok(())
}
