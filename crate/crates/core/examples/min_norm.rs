//! Closest points of perturbed polytopes, with certificates.

use knx::convex::{hull_contains, min_norm_point, witnesses_compare, Polytope};
use knx::scalar::{eps_sign, EpsScalar, Rational};
use knx::vector::{EpsVector, GramForm, RationalVector};

fn main() -> knx::Result<()> {
    let form = GramForm::identity(2);
    let lambda = RationalVector::from_ints(&[0, 1]);
    let points = [RationalVector::from_ints(&[0, 0]), RationalVector::from_ints(&[1, 1])];
    let segment = Polytope::perturbed(&points, &lambda, form.clone())?;
    let cert = min_norm_point(&segment)?;
    println!("closest point {}  support {:?}  verified {}", cert.point, cert.support, cert.verify(&segment));

    let triangle = Polytope::perturbed(
        &[RationalVector::from_ints(&[0, 0]), RationalVector::from_ints(&[1, 0]), RationalVector::from_ints(&[1, 1])],
        &lambda,
        form.clone(),
    )?;
    let origin = EpsVector::zeros(2);
    println!("origin in triangle: {}", hull_contains(&origin, &triangle)?);

    let near = EpsVector::new(RationalVector::zeros(2), lambda.clone());
    println!(
        "ελ closer than the origin to every vertex: {}",
        witnesses_compare(&origin, &near, triangle.vertices(), &form)
    );

    // Signs are taken as ε → 0 from below.
    let x = EpsScalar::new(Rational::zero(), Rational::one(), Rational::zero());
    println!("sign of ε: {:?}", eps_sign(&x));
    Ok(())
}
