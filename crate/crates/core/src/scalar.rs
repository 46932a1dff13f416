//! Exact rationals and infinitesimal scalars.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms.
//! [`EpsScalar`] is a polynomial `c0 + c1·ε + c2·ε²` in a formal infinitesimal
//! `ε`, compared in the limit `ε → 0⁻`. Nothing in this module ever assigns a
//! numeric value to `ε` except [`EpsScalar::eval`], which exists for oracles.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{KnxError, Result};

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn sign(&self) -> Sign {
        match self.0.numer().sign() {
            num_bigint::Sign::Minus => Sign::Negative,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Positive,
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// The integer value when the denominator is 1.
    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_bigint().and_then(|n| n.to_i64())
    }

    /// Lossy; only for display and oracles that never feed back into certificates.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow2_recip(k: u32) -> Self {
        Rational::new(1, BigInt::one() << k)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Strict `"p"` or `"p/q"` syntax. Decimal points, exponents, signs on the
/// denominator and surrounding whitespace are all rejected.
impl FromStr for Rational {
    type Err = KnxError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || KnxError::Schema(format!("malformed rational {s:?}; expected \"p\" or \"p/q\""));
        match s.split_once('/') {
            None => parse_int(s).map(Rational::from_integer).ok_or_else(bad),
            Some((n, d)) => {
                let num = parse_int(n).ok_or_else(bad)?;
                if d.starts_with('-') {
                    return Err(bad());
                }
                let den = parse_int(d).ok_or_else(bad)?;
                if den.is_zero() {
                    return Err(KnxError::Schema(format!("zero denominator in {s:?}")));
                }
                Ok(Rational::new(num, den))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Least common multiple of the denominators.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// `c0 + c1·ε + c2·ε²`, read in the limit `ε → 0⁻`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsScalar {
    pub c0: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

impl EpsScalar {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        EpsScalar { c0, c1, c2 }
    }

    pub fn constant(c0: Rational) -> Self {
        EpsScalar {
            c0,
            ..Default::default()
        }
    }

    pub fn affine(c0: Rational, c1: Rational) -> Self {
        EpsScalar {
            c0,
            c1,
            c2: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        if !self.c2.is_zero() {
            Some(2)
        } else if !self.c1.is_zero() {
            Some(1)
        } else if !self.c0.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Sign for every sufficiently small negative `ε`.
    pub fn sign(&self) -> Sign {
        eps_sign(self)
    }

    pub fn scale(&self, k: &Rational) -> EpsScalar {
        EpsScalar::new(&self.c0 * k, &self.c1 * k, &self.c2 * k)
    }

    /// Product, refusing anything past `ε²`.
    pub fn checked_mul(&self, rhs: &EpsScalar) -> Result<EpsScalar> {
        let d = self.degree().unwrap_or(0) + rhs.degree().unwrap_or(0);
        if d > 2 && !(self.is_zero() || rhs.is_zero()) {
            return Err(KnxError::DegreeOverflow);
        }
        Ok(EpsScalar::new(
            &self.c0 * &rhs.c0,
            &self.c0 * &rhs.c1 + &self.c1 * &rhs.c0,
            &self.c0 * &rhs.c2 + &self.c1 * &rhs.c1 + &self.c2 * &rhs.c0,
        ))
    }

    /// Value at a concrete `ε`.
    pub fn eval(&self, eps: &Rational) -> Rational {
        &self.c0 + eps * (&self.c1 + eps * &self.c2)
    }
}

/// Sign of `x(ε)` for all sufficiently small `ε < 0`: the first nonzero
/// coefficient decides, with the linear coefficient's sign flipped.
pub fn eps_sign(x: &EpsScalar) -> Sign {
    if !x.c0.is_zero() {
        x.c0.sign()
    } else if !x.c1.is_zero() {
        x.c1.sign().flip()
    } else {
        x.c2.sign()
    }
}

impl PartialOrd for EpsScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EpsScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match eps_sign(&(self - other)) {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl fmt::Display for EpsScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if !self.c0.is_zero() {
            terms.push(format!("{}", self.c0));
        }
        if !self.c1.is_zero() {
            terms.push(format!("({})ε", self.c1));
        }
        if !self.c2.is_zero() {
            terms.push(format!("({})ε²", self.c2));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for EpsScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&EpsScalar> for &EpsScalar {
    type Output = EpsScalar;
    fn add(self, rhs: &EpsScalar) -> EpsScalar {
        EpsScalar::new(&self.c0 + &rhs.c0, &self.c1 + &rhs.c1, &self.c2 + &rhs.c2)
    }
}

impl Sub<&EpsScalar> for &EpsScalar {
    type Output = EpsScalar;
    fn sub(self, rhs: &EpsScalar) -> EpsScalar {
        EpsScalar::new(&self.c0 - &rhs.c0, &self.c1 - &rhs.c1, &self.c2 - &rhs.c2)
    }
}

impl Add for EpsScalar {
    type Output = EpsScalar;
    fn add(self, rhs: EpsScalar) -> EpsScalar {
        &self + &rhs
    }
}

impl Sub for EpsScalar {
    type Output = EpsScalar;
    fn sub(self, rhs: EpsScalar) -> EpsScalar {
        &self - &rhs
    }
}

impl Neg for &EpsScalar {
    type Output = EpsScalar;
    fn neg(self) -> EpsScalar {
        EpsScalar::new(-&self.c0, -&self.c1, -&self.c2)
    }
}

impl Neg for EpsScalar {
    type Output = EpsScalar;
    fn neg(self) -> EpsScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn eps(c0: i64, c1: i64, c2: i64) -> EpsScalar {
        EpsScalar::new(c0.into(), c1.into(), c2.into())
    }

    #[test]
    fn sign_examples() {
        assert_eq!(eps_sign(&eps(3, 0, 0)), Sign::Positive);
        assert_eq!(eps_sign(&eps(0, 2, 0)), Sign::Negative);
        assert_eq!(eps_sign(&eps(0, 0, 5)), Sign::Positive);
        assert_eq!(eps_sign(&eps(0, 0, 0)), Sign::Zero);
        assert_eq!(eps_sign(&eps(0, -1, -100)), Sign::Positive);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), q(1, 2));
        assert_eq!("-4/2".parse::<Rational>().unwrap().to_string(), "-2");
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        for bad in ["1.5", "", "1/0", "1/-2", " 1", "+1", "1e3", "--1", "1/", "/2"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn zero_is_canonical() {
        let z = q(0, 7);
        assert_eq!(z.denom(), &BigInt::one());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn degree_cap() {
        let lin = eps(0, 1, 0);
        let sq = lin.checked_mul(&lin).unwrap();
        assert_eq!(sq, eps(0, 0, 1));
        assert_eq!(sq.checked_mul(&lin), Err(KnxError::DegreeOverflow));
        assert_eq!(sq.checked_mul(&eps(2, 0, 0)).unwrap(), eps(0, 0, 2));
    }

    #[test]
    fn serde_as_strings() {
        let v = vec![q(1, 2), q(3, 1)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/2","3"]"#);
        let back: Vec<Rational> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Rational>("1.5").is_err());
        assert!(serde_json::from_str::<Rational>("\"1.5\"").is_err());
    }
}
