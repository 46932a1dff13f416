//! Custom root data, sl(n) coordinates, and reporting both orientations.

use knx::exactness::{adjoint_plus_vector_weights, forbidden, ExactnessProblem};
use knx::group::{GroupData, LieCharacter, TorusCharacter};
use knx::kn::{Orientation, WeightSystem};
use knx::vector::{GramForm, RationalVector};

fn v(xs: &[i64]) -> RationalVector {
    RationalVector::from_ints(xs)
}

fn main() -> knx::Result<()> {
    let roots: Vec<RationalVector> = [[1, 0], [0, 1], [1, 1], [1, -1]]
        .iter()
        .flat_map(|r| [v(r), -&v(r)])
        .collect();
    let b2 = GroupData::custom(2, roots, vec![v(&[1, -1]), v(&[0, 1])], GramForm::identity(2), "B2")?;
    println!("dominant form of (-1, 2): {}", b2.weyl_canonicalize(&v(&[-1, 2])));

    let sl3 = GroupData::sl(3)?;
    println!("sl(3) reduces (1, 0, 0) to {}", sl3.reduce(&v(&[1, 0, 0])));

    let gl2 = GroupData::gl(2)?;
    let weights = WeightSystem::cotangent(adjoint_plus_vector_weights(2))?;
    let problem = ExactnessProblem::new(
        gl2,
        weights,
        TorusCharacter::new(v(&[1, 1]))?,
        LieCharacter::parametric(v(&[0, 0]), v(&[1, 1])),
    )
    .with_orientation(Orientation::Both);
    let verdict = forbidden(&problem)?;
    println!("both orientations, forbidden t: {}", verdict.forbidden_rendering.unwrap_or_default());
    Ok(())
}
