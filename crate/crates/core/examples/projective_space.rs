//! Strata of `T*ℂ^{n+1}` under scalar multiplication and the twisted-module threshold.

use knx::exactness::{check, ExactnessProblem, VerdictStatus};
use knx::group::{GroupData, LieCharacter, TorusCharacter};
use knx::kn::{enumerate_kn, KnConfig, WeightSystem};
use knx::scalar::Rational;
use knx::vector::RationalVector;

fn main() -> knx::Result<()> {
    let n = 2;
    let group = GroupData::torus(1)?;
    let weights = WeightSystem::cotangent(vec![RationalVector::from_ints(&[1]); n + 1])?;
    let chi = TorusCharacter::new(RationalVector::from_ints(&[1]))?;

    let result = enumerate_kn(&weights, &chi, &group, &KnConfig::default())?;
    for s in &result.strata {
        println!("beta {}  Y indices {:?}", s.beta, s.y_indices);
    }

    // c = (l + (n+1)/2)·dχ
    for l in -5..=1i64 {
        let c = &Rational::from(l) + &Rational::new(n as i64 + 1, 2);
        let problem = ExactnessProblem::new(
            group.clone(),
            weights.clone(),
            chi.clone(),
            LieCharacter::fixed(RationalVector::new(vec![c])),
        );
        let verdict = check(&problem)?;
        let label = if verdict.status == VerdictStatus::Certified { "certified" } else { "violated" };
        println!("l = {l:>2}: {label}");
    }
    Ok(())
}
