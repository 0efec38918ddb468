//! Ring chain bound and closed form for f = n^alpha up to n = 10^8.

use std::time::Instant;

use gossipage::bounds::{
    crossover_n, ring_alpha_bound_chain, ring_alpha_f, ring_closed_form, CrossoverTerms, FConvention,
};
use gossipage::Rates;

fn main() -> gossipage::Result<()> {
    let rates = Rates::default();
    for alpha in [0.0, 0.1, 0.2, 0.3] {
        println!("alpha = {alpha}");
        for e in 4..=8 {
            let n = 10usize.pow(e);
            let t = Instant::now();
            let f = ring_alpha_f(n, alpha, FConvention::StrictFloor)?;
            let chain = ring_alpha_bound_chain(n, alpha, FConvention::StrictFloor, rates)?;
            let closed = ring_closed_form(n as f64, f as f64, rates)?;
            println!(
                "  n=1e{e} f={f:<4} chain {:>10.3} closed {:>10.3} ({:.2?})",
                chain.v1,
                closed,
                t.elapsed()
            );
        }
        match crossover_n(alpha, 10.0, CrossoverTerms::Weighted)? {
            x if x > 0.0 => println!("  rational term dominates from n ~ {x:.4e}"),
            _ => println!("  rational term dominates for every n"),
        }
    }
    Ok(())
}
