//! Hypercube chains, the closed form, and the derived constants.

use gossipage::bounds::{
    compute_constants, ddim_bound_chain, ddim_constants, hypercube_closed_form, unit_hypercube_bound_chain,
};
use gossipage::Rates;

fn main() -> gossipage::Result<()> {
    let rates = Rates::default();
    for m in [2, 4, 8, 12, 16, 20] {
        let chain = unit_hypercube_bound_chain(m, rates)?;
        let n = (1u64 << m) as f64;
        println!(
            "m={m:<2} chain {:>8.3} closed {:>10.3} ln n {:>6.3}",
            chain.v1,
            hypercube_closed_form(m, rates)?,
            n.ln()
        );
    }

    let c = compute_constants()?;
    println!(
        "beta: quadrature {:.12} gamma-function {:.12}",
        c.beta_quadrature, c.beta_closed
    );
    println!("beta' = {:.6}", c.beta_prime);
    for d in 2..=5 {
        let k = ddim_constants(d)?;
        let chain = ddim_bound_chain(8, d, rates)?;
        println!(
            "d={d}: L_d {:.8} / {:.8}, C_d {:.5}, chain m=8 {:.3} conjecture={}",
            k.l_quadrature, k.l_closed, k.c, chain.v1, chain.conjecture
        );
    }
    Ok(())
}
