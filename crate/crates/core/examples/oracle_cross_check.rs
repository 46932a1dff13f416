//! Cross-checking the symbolic enumeration against the concrete-ε oracle.

use knx::oracle::{cross_check_enumeration, random_samples, OracleConfig};

fn main() -> knx::Result<()> {
    let config = OracleConfig::default();
    let mut disagreements = 0;
    for (seed, problem) in random_samples(20, 2024)? {
        let report = cross_check_enumeration(&problem, &config)?;
        println!("seed {seed:>20}: {}", report.summary());
        if !report.agrees() {
            disagreements += 1;
        }
    }
    println!("{disagreements} disagreements");
    Ok(())
}
