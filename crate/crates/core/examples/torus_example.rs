//! Two weights `(1,0)` and `(1,1)` of a rank-two torus, stratified directly.

use knx::group::{GroupData, TorusCharacter};
use knx::kn::{classify_point, enumerate_kn, KnConfig, PointClass, WeightSystem};
use knx::vector::RationalVector;

fn main() -> knx::Result<()> {
    let group = GroupData::torus(2)?;
    let weights = WeightSystem::raw(vec![RationalVector::from_ints(&[1, 0]), RationalVector::from_ints(&[1, 1])])?;
    let config = KnConfig::default();

    for lambda in [[0, 1], [0, -1]] {
        let chi = TorusCharacter::new(RationalVector::from_ints(&lambda))?;
        let result = enumerate_kn(&weights, &chi, &group, &config)?;
        println!("λ = {:?}: semistable locus nonempty: {}", lambda, result.semistable_nonempty);
        for s in &result.strata {
            println!("  beta {}  closest point ε·{}  q {}", s.beta, s.closest_direction, s.q_norm);
        }
        for support in [vec![], vec![0], vec![1], vec![0, 1]] {
            match classify_point(&support, &weights, &chi, &group, &config)? {
                PointClass::Semistable => println!("  support {support:?}: semistable"),
                PointClass::Stratum { beta, .. } => println!("  support {support:?}: stratum {beta}"),
            }
        }
    }
    Ok(())
}
