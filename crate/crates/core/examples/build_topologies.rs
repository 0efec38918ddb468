//! Builds one instance of every family and prints its shape.

use gossipage::{Family, GraphBuilder, Rates, TopologyDescriptor};

fn main() -> gossipage::Result<()> {
    let builder = GraphBuilder::new().rates(Rates::new(1.0, 1.0)?);
    let families = [
        Family::Ring { n: 12, f: 2 },
        Family::Grid { m: 6, k: 4 },
        Family::UnitHypercube { m: 4 },
        Family::TorusHypercube { m: 4, d: 3 },
        Family::FullyConnected { n: 8 },
    ];
    for family in families {
        let g = builder.build(family)?;
        let hist: Vec<String> = g.degree_histogram().iter().map(|(d, c)| format!("{d}x{c}")).collect();
        println!(
            "{family:<36} n={:<4} degrees [{}] out-rate {:.3} symmetric={} connected={}",
            g.n(),
            hist.join(" "),
            g.out_rate(0),
            g.is_symmetric(),
            g.is_connected()
        );
    }

    // Descriptors round-trip through JSON, the format the CLI reads.
    let d = TopologyDescriptor::new(Family::Grid { m: 4, k: 2 }, Rates::default());
    let json = serde_json::to_string(&d)?;
    println!("{json}");
    let back: TopologyDescriptor = serde_json::from_str(&json)?;
    assert_eq!(back, d);
    Ok(())
}
