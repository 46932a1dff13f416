//! Rational and ε-affine vectors, and the positive definite pairing form.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{KnxError, Result};
use crate::linalg;
use crate::scalar::{EpsScalar, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct RationalVector {
    coords: Vec<Rational>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVector { coords }
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        RationalVector::new(xs.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RationalVector::new(vec![Rational::zero(); n])
    }

    /// Standard basis vector `e_i` of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.coords[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|x| x * k).collect())
    }

    /// Euclidean dot product, independent of any form.
    pub fn dot(&self, other: &RationalVector) -> Rational {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn concat(&self, other: &RationalVector) -> RationalVector {
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().cloned());
        RationalVector::new(coords)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&RationalVector> for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        debug_assert_eq!(self.len(), rhs.len());
        RationalVector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&RationalVector> for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        debug_assert_eq!(self.len(), rhs.len());
        RationalVector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector::new(self.coords.iter().map(|x| -x).collect())
    }
}

/// `constant + ε·linear`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpsVector {
    pub constant: RationalVector,
    pub linear: RationalVector,
}

impl EpsVector {
    pub fn new(constant: RationalVector, linear: RationalVector) -> Self {
        assert_eq!(constant.len(), linear.len(), "EpsVector parts differ in length");
        EpsVector { constant, linear }
    }

    pub fn from_constant(constant: RationalVector) -> Self {
        let n = constant.len();
        EpsVector::new(constant, RationalVector::zeros(n))
    }

    /// `a + ε·direction`.
    pub fn perturbed(a: &RationalVector, direction: &RationalVector) -> Self {
        EpsVector::new(a.clone(), direction.clone())
    }

    pub fn zeros(n: usize) -> Self {
        EpsVector::from_constant(RationalVector::zeros(n))
    }

    pub fn len(&self) -> usize {
        self.constant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constant.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_zero()
    }

    pub fn coord(&self, i: usize) -> EpsScalar {
        EpsScalar::affine(self.constant.coords()[i].clone(), self.linear.coords()[i].clone())
    }

    pub fn eval(&self, eps: &Rational) -> RationalVector {
        &self.constant + &self.linear.scale(eps)
    }

    pub fn scale(&self, k: &Rational) -> EpsVector {
        EpsVector::new(self.constant.scale(k), self.linear.scale(k))
    }
}

impl fmt::Display for EpsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.linear.is_zero() {
            write!(f, "{}", self.constant)
        } else {
            write!(f, "{} + ε{}", self.constant, self.linear)
        }
    }
}

impl fmt::Debug for EpsVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&EpsVector> for &EpsVector {
    type Output = EpsVector;
    fn add(self, rhs: &EpsVector) -> EpsVector {
        EpsVector::new(&self.constant + &rhs.constant, &self.linear + &rhs.linear)
    }
}

impl Sub<&EpsVector> for &EpsVector {
    type Output = EpsVector;
    fn sub(self, rhs: &EpsVector) -> EpsVector {
        EpsVector::new(&self.constant - &rhs.constant, &self.linear - &rhs.linear)
    }
}

/// Symmetric positive definite rational bilinear form.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rational>>", into = "Vec<Vec<Rational>>")]
pub struct GramForm {
    matrix: Vec<Vec<Rational>>,
}

impl GramForm {
    /// Checks symmetry and positive definiteness (all leading principal minors > 0).
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(KnxError::InvalidGroup("form must have positive rank".into()));
        }
        if matrix.iter().any(|r| r.len() != n) {
            return Err(KnxError::InvalidGroup("form must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(KnxError::InvalidGroup("form is not symmetric".into()));
                }
            }
        }
        for k in 1..=n {
            let minor: Vec<Vec<Rational>> = matrix[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !linalg::determinant(&minor).is_positive() {
                return Err(KnxError::InvalidGroup("form is not positive definite".into()));
            }
        }
        Ok(GramForm { matrix })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        GramForm { matrix }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &GramForm) -> GramForm {
        let (a, b) = (self.rank(), other.rank());
        let mut matrix = vec![vec![Rational::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                matrix[i][j] = self.matrix[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                matrix[a + i][a + j] = other.matrix[i][j].clone();
            }
        }
        GramForm { matrix }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        *self == GramForm::identity(self.rank())
    }

    /// `uᵀ q v`.
    pub fn pair(&self, u: &RationalVector, v: &RationalVector) -> Rational {
        let (u, v) = (u.coords(), v.coords());
        let mut acc = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let row: Rational = self.matrix[i].iter().zip(v).map(|(q, x)| q * x).sum();
            acc += &(ui * &row);
        }
        acc
    }

    pub fn norm2(&self, v: &RationalVector) -> Rational {
        self.pair(v, v)
    }
}

impl TryFrom<Vec<Vec<Rational>>> for GramForm {
    type Error = KnxError;
    fn try_from(m: Vec<Vec<Rational>>) -> Result<Self> {
        GramForm::new(m)
    }
}

impl From<GramForm> for Vec<Vec<Rational>> {
    fn from(g: GramForm) -> Self {
        g.matrix
    }
}

impl fmt::Debug for GramForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.matrix).finish()
    }
}

/// `uᵀ q v` expanded as a polynomial in ε. Affine arguments keep this within degree 2.
pub fn pair(u: &EpsVector, v: &EpsVector, q: &GramForm) -> EpsScalar {
    EpsScalar::new(
        q.pair(&u.constant, &v.constant),
        q.pair(&u.constant, &v.linear) + q.pair(&u.linear, &v.constant),
        q.pair(&u.linear, &v.linear),
    )
}

/// The `q`-orthogonal component of `v` relative to `span(spanning)`.
pub fn project_out_span(v: &RationalVector, spanning: &[RationalVector], q: &GramForm) -> RationalVector {
    let rows: Vec<Vec<Rational>> = spanning.iter().map(|s| s.coords().to_vec()).collect();
    let basis: Vec<&RationalVector> = linalg::independent_subset(&rows)
        .into_iter()
        .map(|i| &spanning[i])
        .collect();
    if basis.is_empty() {
        return v.clone();
    }
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| q.pair(a, b)).collect())
        .collect();
    let rhs: Vec<Rational> = basis.iter().map(|a| q.pair(a, v)).collect();
    let coeffs = linalg::solve_unique(&gram, &[rhs])
        .expect("Gram matrix of independent vectors is invertible")
        .remove(0);
    basis
        .iter()
        .zip(&coeffs)
        .fold(v.clone(), |acc, (b, c)| &acc - &b.scale(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    #[test]
    fn pair_examples() {
        let id = GramForm::identity(2);
        let e = |c: &[i64], l: &[i64]| EpsVector::new(v(c), v(l));
        assert!(pair(&e(&[1, 0], &[0, 0]), &e(&[0, 1], &[0, 0]), &id).is_zero());
        let u = e(&[0, 0], &[0, 1]);
        assert_eq!(
            pair(&u, &u, &id),
            EpsScalar::new(Rational::zero(), Rational::zero(), Rational::one())
        );
        assert_eq!(
            pair(&e(&[1, 1], &[0, 1]), &e(&[1, 0], &[0, 0]), &id),
            EpsScalar::constant(Rational::one())
        );
    }

    #[test]
    fn projection_examples() {
        let id = GramForm::identity(2);
        let half = Rational::new(1, 2);
        assert_eq!(
            project_out_span(&v(&[0, 1]), &[v(&[1, 1])], &id),
            RationalVector::new(vec![-half.clone(), half])
        );
        assert_eq!(project_out_span(&v(&[1, 1]), &[], &id), v(&[1, 1]));
        assert_eq!(project_out_span(&v(&[1, 0]), &[v(&[1, 0]), v(&[2, 0])], &id), v(&[0, 0]));
    }

    #[test]
    fn gram_checks() {
        assert!(GramForm::new(vec![vec![Rational::zero(); 2]; 2]).is_err());
        assert!(GramForm::new(GramForm::identity(3).matrix().to_vec()).is_ok());
        let r = |x: i64| Rational::from(x);
        assert!(GramForm::new(vec![vec![r(2), r(-1)], vec![r(-1), r(2)]]).is_ok());
        assert!(GramForm::new(vec![vec![r(1), r(2)], vec![r(2), r(1)]]).is_err());
        assert!(GramForm::new(vec![vec![r(1), r(0)], vec![r(1), r(1)]]).is_err());
    }
}
