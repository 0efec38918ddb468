//! Grid chain, closed form and leading-order bound against the exact age.

use gossipage::bounds::{grid_asymptotic, grid_bound_chain, grid_closed_form, GRID_ASYMPTOTIC_COEFFICIENT};
use gossipage::exact::exact_single_node;
use gossipage::topology::build_grid;
use gossipage::Rates;

fn main() -> gossipage::Result<()> {
    let rates = Rates::default();
    println!("exact vs chain on small grids:");
    for (m, k) in [(2, 2), (3, 2), (3, 3), (4, 3)] {
        let exact = exact_single_node(&build_grid(m, k)?)?.value;
        let chain = grid_bound_chain(m, k, rates)?;
        println!("  {m}x{k}: exact {exact:.4} chain {:.4}", chain.v1);
    }

    println!("square grids (leading coefficient {GRID_ASYMPTOTIC_COEFFICIENT}):");
    for m in [10, 20, 40, 100, 1000] {
        let n = (m * m) as f64;
        let chain = grid_bound_chain(m, m, rates)?;
        println!(
            "  m={m:<5} chain {:>9.3} closed {:>9.3} asymptotic {:>9.3} chain/n^(1/3) {:.3}",
            chain.v1,
            grid_closed_form(m, m, rates)?,
            grid_asymptotic(n, rates)?,
            chain.v1 / n.cbrt()
        );
    }
    let chain = grid_bound_chain(30, 30, rates)?;
    println!("30x30 chain at regime edges: {:?}", chain.samples);
    Ok(())
}
