//! `GL_n` on `𝔤𝔩_n ⊕ ℂⁿ`: strata, shifts, and the forbidden parameters.

use knx::exactness::{cherednik_preset, forbidden};

fn main() -> knx::Result<()> {
    for n in 1..=3 {
        let problem = cherednik_preset(n)?;
        let verdict = forbidden(&problem)?;
        println!("n = {n}");
        for s in &verdict.per_stratum {
            println!(
                "  beta {}  shift {}  I = ⟨{}⟩",
                s.beta_dominant,
                s.shift.shift,
                s.semigroup.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
            );
        }
        println!("  forbidden t: {}", verdict.forbidden_rendering.unwrap_or_default());
    }
    for note in cherednik_preset(1)?.notes {
        println!("note: {note}");
    }
    Ok(())
}
