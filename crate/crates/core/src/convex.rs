//! Exact convex geometry over ε-affine points.
//!
//! Every polytope here is a translate `{a_i + ε·L}` of a rational polytope by a
//! common ε-direction `L`, so affine independence of a vertex subset does not
//! depend on `ε` and the closest point of any affine hull is affine in `ε`.

use itertools::Itertools;

use crate::error::{KnxError, Result};
use crate::linalg;
use crate::scalar::{eps_sign, EpsScalar, Rational, Sign};
use crate::vector::{pair, EpsVector, GramForm, RationalVector};

pub const DEFAULT_VERTEX_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<EpsVector>,
    form: GramForm,
}

impl Polytope {
    pub fn new(vertices: Vec<EpsVector>, form: GramForm) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| KnxError::InvalidParameter("polytope needs at least one vertex".into()))?;
        let n = form.rank();
        for v in &vertices {
            if v.len() != n {
                return Err(KnxError::DimensionMismatch { expected: n, got: v.len() });
            }
            if v.linear != first.linear {
                return Err(KnxError::MixedPerturbation);
            }
        }
        Ok(Polytope { vertices, form })
    }

    /// `conv{a_i + ε·direction}`.
    pub fn perturbed(points: &[RationalVector], direction: &RationalVector, form: GramForm) -> Result<Self> {
        Polytope::new(points.iter().map(|a| EpsVector::perturbed(a, direction)).collect(), form)
    }

    pub fn vertices(&self) -> &[EpsVector] {
        &self.vertices
    }

    pub fn form(&self) -> &GramForm {
        &self.form
    }

    fn shift(&self) -> &RationalVector {
        &self.vertices[0].linear
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.vertices.len() > cap {
            return Err(KnxError::CapExceeded {
                what: "polytope vertices",
                count: self.vertices.len(),
                cap,
            });
        }
        Ok(())
    }

    fn max_support(&self) -> usize {
        (self.form.rank() + 1).min(self.vertices.len())
    }
}

/// The closest point of a polytope to the origin, with the face that carries it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinNormCertificate {
    pub point: EpsVector,
    /// Vertex indices, ascending.
    pub support: Vec<usize>,
    /// Convex weights on `support`, in the same order.
    pub coefficients: Vec<EpsScalar>,
}

impl MinNormCertificate {
    /// Re-checks every certificate condition from scratch.
    pub fn verify(&self, polytope: &Polytope) -> bool {
        let q = polytope.form();
        let total = self
            .coefficients
            .iter()
            .fold(EpsScalar::zero(), |acc, c| &acc + c);
        if total != EpsScalar::constant(Rational::one()) {
            return false;
        }
        if self.coefficients.iter().any(|c| eps_sign(c) == Sign::Negative) {
            return false;
        }
        if self.coefficients.iter().any(|c| !c.c2.is_zero()) {
            return false;
        }
        // The ε² terms c1_i·L cancel because the weights sum to one.
        let mut combo = EpsVector::zeros(q.rank());
        for (c, &i) in self.coefficients.iter().zip(&self.support) {
            let v = &polytope.vertices()[i];
            let const_part = v.constant.scale(&c.c0);
            let lin_part = &v.linear.scale(&c.c0) + &v.constant.scale(&c.c1);
            combo = &combo + &EpsVector::new(const_part, lin_part);
        }
        if combo != self.point {
            return false;
        }
        polytope
            .vertices()
            .iter()
            .all(|s| eps_sign(&pair(&self.point, &(s - &self.point), q)) != Sign::Negative)
    }
}

/// Closest point of the affine hull of `support` to the origin, with its
/// affine coefficients; `None` if the support is affinely dependent.
fn affine_closest(polytope: &Polytope, support: &[usize]) -> Option<(EpsVector, Vec<EpsScalar>)> {
    let q = polytope.form();
    let base = &polytope.vertices[support[0]];
    let shift = polytope.shift();
    if support.len() == 1 {
        return Some((base.clone(), vec![EpsScalar::constant(Rational::one())]));
    }
    let diffs: Vec<RationalVector> = support[1..]
        .iter()
        .map(|&i| &polytope.vertices[i].constant - &base.constant)
        .collect();
    let gram: Vec<Vec<Rational>> = diffs
        .iter()
        .map(|a| diffs.iter().map(|b| q.pair(a, b)).collect())
        .collect();
    let rhs_const: Vec<Rational> = diffs.iter().map(|d| -q.pair(d, &base.constant)).collect();
    let rhs_lin: Vec<Rational> = diffs.iter().map(|d| -q.pair(d, shift)).collect();
    let mut sol = linalg::solve_unique(&gram, &[rhs_const, rhs_lin])?;
    let (t_lin, t_const) = (sol.pop()?, sol.pop()?);

    let mut constant = base.constant.clone();
    let mut linear = shift.clone();
    for ((d, tc), tl) in diffs.iter().zip(&t_const).zip(&t_lin) {
        constant = &constant + &d.scale(tc);
        linear = &linear + &d.scale(tl);
    }
    let mut coefficients = Vec::with_capacity(support.len());
    coefficients.push(EpsScalar::affine(
        Rational::one() - t_const.iter().sum::<Rational>(),
        -t_lin.iter().sum::<Rational>(),
    ));
    for (tc, tl) in t_const.into_iter().zip(t_lin) {
        coefficients.push(EpsScalar::affine(tc, tl));
    }
    Some((EpsVector::new(constant, linear), coefficients))
}

pub fn min_norm_point(polytope: &Polytope) -> Result<MinNormCertificate> {
    min_norm_point_with_cap(polytope, DEFAULT_VERTEX_CAP)
}

/// Face enumeration: supports are tried by size, then lexicographically, and
/// the first one whose affine-hull closest point is a convex combination
/// satisfying the variational inequality against every vertex wins.
pub fn min_norm_point_with_cap(polytope: &Polytope, cap: usize) -> Result<MinNormCertificate> {
    polytope.check_cap(cap)?;
    let q = polytope.form();
    let m = polytope.vertices.len();
    for size in 1..=polytope.max_support() {
        for support in (0..m).combinations(size) {
            let Some((point, coefficients)) = affine_closest(polytope, &support) else {
                continue;
            };
            if coefficients.iter().any(|c| eps_sign(c) == Sign::Negative) {
                continue;
            }
            let optimal = polytope
                .vertices
                .iter()
                .all(|s| eps_sign(&pair(&point, &(s - &point), q)) != Sign::Negative);
            if optimal {
                return Ok(MinNormCertificate {
                    point,
                    support,
                    coefficients,
                });
            }
        }
    }
    Err(KnxError::InternalInconsistency(
        "no face of the polytope carries its closest point".into(),
    ))
}

pub fn hull_contains(p: &EpsVector, polytope: &Polytope) -> Result<bool> {
    hull_contains_with_cap(p, polytope, DEFAULT_VERTEX_CAP)
}

/// Exact feasibility of `Σ t_i v_i = p, Σ t_i = 1, t ≥ 0` for all small `ε < 0`,
/// by enumerating basic solutions on affinely independent supports.
pub fn hull_contains_with_cap(p: &EpsVector, polytope: &Polytope, cap: usize) -> Result<bool> {
    polytope.check_cap(cap)?;
    let n = polytope.form().rank();
    if p.len() != n {
        return Err(KnxError::DimensionMismatch { expected: n, got: p.len() });
    }
    let target_lin = &p.linear - polytope.shift();
    let mut rhs_const: Vec<Rational> = p.constant.coords().to_vec();
    rhs_const.push(Rational::one());
    let mut rhs_lin: Vec<Rational> = target_lin.coords().to_vec();
    rhs_lin.push(Rational::zero());

    let m = polytope.vertices.len();
    for size in 1..=polytope.max_support() {
        for support in (0..m).combinations(size) {
            let a: Vec<Vec<Rational>> = (0..=n)
                .map(|row| {
                    support
                        .iter()
                        .map(|&i| {
                            if row < n {
                                polytope.vertices[i].constant.coords()[row].clone()
                            } else {
                                Rational::one()
                            }
                        })
                        .collect()
                })
                .collect();
            let Some(sol) = linalg::solve_unique(&a, &[rhs_const.clone(), rhs_lin.clone()]) else {
                continue;
            };
            let feasible = sol[0]
                .iter()
                .zip(&sol[1])
                .all(|(c, l)| eps_sign(&EpsScalar::affine(c.clone(), l.clone())) != Sign::Negative);
            if feasible {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn dist2(a: &EpsVector, b: &EpsVector, q: &GramForm) -> EpsScalar {
    let d = a - b;
    pair(&d, &d, q)
}

/// True iff `p_alt` is strictly closer than `p` to every point of `points`.
pub fn witnesses_compare(p: &EpsVector, p_alt: &EpsVector, points: &[EpsVector], q: &GramForm) -> bool {
    points
        .iter()
        .all(|s| eps_sign(&(&dist2(p_alt, s, q) - &dist2(p, s, q))) == Sign::Negative)
}
