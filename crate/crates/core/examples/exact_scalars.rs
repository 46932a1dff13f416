//! Exact rationals and the infinitesimal ε.

use knx::scalar::{EpsScalar, Rational};

fn main() -> knx::Result<()> {
    let a: Rational = "3/4".parse()?;
    let b: Rational = "-1/6".parse()?;
    println!("{a} + {b} = {}", &a + &b);
    println!("\"1.5\" parses: {}", "1.5".parse::<Rational>().is_ok());

    let x = EpsScalar::affine(Rational::zero(), Rational::one());
    let y = EpsScalar::affine(Rational::zero(), Rational::from(2));
    println!("ε < 2ε as ε → 0⁻: {}", y < x);
    let square = x.checked_mul(&x)?;
    println!("ε·ε = {square}, ε·ε·ε overflows: {}", square.checked_mul(&x).is_err());
    Ok(())
}
