//! Runs a declarative experiment and cross-checks the methods against each other.

use gossipage::harness::{crosscheck, parse_specs, run, write_csv};

const SPEC: &str = r#"{
    "name": "demo_ring",
    "family": "ring",
    "sweep": { "n": [8, 10, 12], "f": [1, 2] },
    "methods": ["exact", "simulate", "chain", "closed_form"],
    "sim": { "horizon": 3000, "replications": 8, "seed": 5 },
    "crosscheck_seeds": 20
}"#;

fn main() -> gossipage::Result<()> {
    let specs = parse_specs(SPEC)?;
    let spec = &specs[0];
    let rows = run(spec)?;
    write_csv(std::io::stdout().lock(), &rows, true)?;

    let report = crosscheck(spec)?;
    println!("{} checks, all passed: {}", report.checks.len(), report.passed());
    for c in report.failures() {
        println!("  FAILED {} {} {}: {} vs {}", c.family, c.params, c.check, c.lhs, c.rhs);
    }
    Ok(())
}
