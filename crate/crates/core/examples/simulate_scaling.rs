//! Simulated ages on growing rings and grids, with power-law fits.

use gossipage::sim::{fit_scaling, simulate, SimConfig};
use gossipage::topology::{build_grid, build_ring};

fn main() -> gossipage::Result<()> {
    let cfg = SimConfig::with_horizon(2000.0, 4, 7);

    let mut ring = Vec::new();
    for n in [64, 128, 256, 512] {
        let r = simulate(&build_ring(n, 1)?, &cfg)?;
        println!(
            "ring n={n:<4} v1 {:.3} ± {:.3} ({} events)",
            r.result.value,
            r.result.ci_halfwidth.unwrap_or(0.0),
            r.events.total()
        );
        ring.push((n as f64, r.result.value));
    }
    let fit = fit_scaling(&ring)?;
    println!("ring exponent {:.3} (r² {:.4})", fit.exponent, fit.r_squared);

    let mut grid = Vec::new();
    for m in [10, 15, 20, 30] {
        let r = simulate(&build_grid(m, m)?, &cfg)?;
        let n = (m * m) as f64;
        println!(
            "grid {m}x{m} v1 {:.3} = {:.3} n^(1/3)",
            r.result.value,
            r.result.value / n.cbrt()
        );
        grid.push((n, r.result.value));
    }
    println!("grid exponent {:.3}", fit_scaling(&grid)?.exponent);

    let per_node = SimConfig { per_node: true, ..cfg };
    let r = simulate(&build_grid(5, 5)?, &per_node)?;
    if let Some(ages) = r.per_node {
        println!("5x5 per-node ages, first row: {:.3?}", &ages[..5]);
    }
    Ok(())
}
