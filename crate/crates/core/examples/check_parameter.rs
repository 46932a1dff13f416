//! Certifying a fixed parameter, or exhibiting a witness when it fails.

use knx::exactness::{check, cherednik_preset, VerdictStatus};
use knx::scalar::Rational;

fn main() -> knx::Result<()> {
    for t in [Rational::new(3, 4), Rational::new(3, 2)] {
        let preset = cherednik_preset(2)?;
        let c = preset.c.at(&t);
        let verdict = check(&preset.with_c(c))?;
        println!("t = {t}: {:?}", verdict.status);
        for s in &verdict.per_stratum {
            let c_of_beta = s.c_of_beta.as_ref().expect("fixed parameter");
            match &s.witness {
                Some(w) => println!("  {}: c(beta) = {c_of_beta} = {w}", s.beta),
                None => println!("  {}: c(beta) = {c_of_beta} avoids {}", s.beta, s.shifted_semigroup),
            }
        }
        if verdict.status == VerdictStatus::Violated {
            assert!(verdict.witnesses().all(|w| verdict.per_stratum.iter().any(|s| s.c_of_beta == Some(w.value()))));
        }
    }
    Ok(())
}
