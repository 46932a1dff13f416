//! Numerical semigroups, membership witnesses and forbidden-set descriptions.

use knx::scalar::Rational;
use knx::semigroup::{render_union, simplify_union, NumericalSemigroup, SetDescription};

fn main() -> knx::Result<()> {
    let gens: Vec<Rational> = [4, 6].iter().map(|&g| Rational::from(g)).collect();
    let s = NumericalSemigroup::from_generators(&gens)?;
    println!("⟨4, 6⟩: content {}, gaps {:?}, conductor {}", s.content(), s.gaps(), s.conductor());
    println!("as a set: {}", s.describe(&Rational::zero()));

    let s = NumericalSemigroup::from_generators(&[Rational::from(5), Rational::from(7)])?;
    let target = Rational::from(31);
    match s.witness(&Rational::zero(), &target) {
        Some(w) => println!("31 = {w}"),
        None => println!("31 is a gap"),
    }

    let half = Rational::new(1, 2);
    let loci: Vec<SetDescription> = (1..=3)
        .map(|k| SetDescription::ray(half.clone(), Rational::new(1, k)))
        .collect();
    println!("union: {}", render_union(&simplify_union(&loci)));
    Ok(())
}
