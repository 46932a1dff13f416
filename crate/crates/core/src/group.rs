//! Reductive group data on a maximal torus: roots, the invariant form, simple
//! reflections and characters.
//!
//! Weyl groups are never materialized; only the simple reflections are stored
//! and the dominant representative of an orbit is found by repeated reflection.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{KnxError, Result};
use crate::linalg;
use crate::scalar::{lcm_denominators, Rational};
use crate::vector::{project_out_span, GramForm, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupKind {
    Torus { rank: usize },
    Gl { n: usize },
    Sl { n: usize },
    Product { factors: Vec<GroupKind> },
    Custom {
        rank: usize,
        roots: Vec<RationalVector>,
        simple_roots: Vec<RationalVector>,
        form: GramForm,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupData {
    rank: usize,
    roots: Vec<RationalVector>,
    simple_roots: Vec<RationalVector>,
    form: GramForm,
    label: String,
    /// Directions quotiented out of every character and weight (the centre of
    /// each `sl(n)` factor presented on `gl(n)` coordinates).
    central_quotient: Vec<RationalVector>,
}

impl GroupData {
    pub fn torus(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(KnxError::InvalidParameter("torus rank must be at least 1".into()));
        }
        Ok(GroupData {
            rank,
            roots: Vec::new(),
            simple_roots: Vec::new(),
            form: GramForm::identity(rank),
            label: format!("T^{rank}"),
            central_quotient: Vec::new(),
        })
    }

    pub fn gl(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(KnxError::InvalidParameter("gl(n) needs n >= 1".into()));
        }
        let e = |i| RationalVector::unit(n, i);
        let mut roots = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    roots.push(&e(i) - &e(j));
                }
            }
        }
        let simple_roots = (0..n.saturating_sub(1)).map(|i| &e(i) - &e(i + 1)).collect();
        Ok(GroupData {
            rank: n,
            roots,
            simple_roots,
            form: GramForm::identity(n),
            label: format!("GL({n})"),
            central_quotient: Vec::new(),
        })
    }

    /// `sl(n)` on the rank-`n` coordinates of `gl(n)`, with `(1,…,1)` quotiented
    /// out of characters and weights.
    pub fn sl(n: usize) -> Result<Self> {
        let mut g = GroupData::gl(n)?;
        g.label = format!("SL({n})");
        g.central_quotient = vec![RationalVector::new(vec![Rational::one(); n])];
        Ok(g)
    }

    pub fn product(factors: &[GroupData]) -> Result<Self> {
        if factors.is_empty() {
            return Err(KnxError::InvalidParameter("product needs at least one factor".into()));
        }
        let rank: usize = factors.iter().map(|g| g.rank).sum();
        let mut offset = 0;
        let mut roots = Vec::new();
        let mut simple_roots = Vec::new();
        let mut central_quotient = Vec::new();
        let pad = |v: &RationalVector, offset: usize| {
            let mut c = vec![Rational::zero(); rank];
            c[offset..offset + v.len()].clone_from_slice(v.coords());
            RationalVector::new(c)
        };
        for g in factors {
            roots.extend(g.roots.iter().map(|r| pad(r, offset)));
            simple_roots.extend(g.simple_roots.iter().map(|r| pad(r, offset)));
            central_quotient.extend(g.central_quotient.iter().map(|r| pad(r, offset)));
            offset += g.rank;
        }
        let form = factors[1..]
            .iter()
            .fold(factors[0].form.clone(), |acc, g| acc.direct_sum(&g.form));
        let label = factors.iter().map(|g| g.label.as_str()).collect::<Vec<_>>().join(" x ");
        Ok(GroupData {
            rank,
            roots,
            simple_roots,
            form,
            label,
            central_quotient,
        })
    }

    pub fn preset(kind: &GroupKind) -> Result<Self> {
        match kind {
            GroupKind::Torus { rank } => GroupData::torus(*rank),
            GroupKind::Gl { n } => GroupData::gl(*n),
            GroupKind::Sl { n } => GroupData::sl(*n),
            GroupKind::Product { factors } => {
                let gs = factors.iter().map(GroupData::preset).collect::<Result<Vec<_>>>()?;
                GroupData::product(&gs)
            }
            GroupKind::Custom { rank, roots, simple_roots, form } => {
                GroupData::custom(*rank, roots.clone(), simple_roots.clone(), form.clone(), "custom")
            }
        }
    }

    /// Raw root datum. Verifies that the roots are nonzero and closed under
    /// negation, that the simple roots are independent roots with pairwise
    /// nonpositive pairings, and that every simple reflection permutes the
    /// roots and preserves the form.
    pub fn custom(
        rank: usize,
        roots: Vec<RationalVector>,
        simple_roots: Vec<RationalVector>,
        form: GramForm,
        label: impl Into<String>,
    ) -> Result<Self> {
        let bad = |m: String| Err(KnxError::InvalidGroup(m));
        if rank == 0 {
            return bad("rank must be at least 1".into());
        }
        if form.rank() != rank {
            return bad(format!("form has rank {} but group has rank {rank}", form.rank()));
        }
        for r in roots.iter().chain(&simple_roots) {
            if r.len() != rank {
                return bad(format!("root {r} has length {} instead of {rank}", r.len()));
            }
        }
        let root_set: HashSet<&RationalVector> = roots.iter().collect();
        for r in &roots {
            if r.is_zero() {
                return bad("zero root".into());
            }
            if !root_set.contains(&-r) {
                return bad(format!("roots not closed under negation: missing {}", -r));
            }
        }
        for s in &simple_roots {
            if !root_set.contains(s) {
                return bad(format!("simple root {s} is not a root"));
            }
        }
        let rows: Vec<Vec<_>> = simple_roots.iter().map(|r| r.coords().to_vec()).collect();
        if linalg::rank(&rows) != simple_roots.len() {
            return bad("simple roots are linearly dependent".into());
        }
        for (i, a) in simple_roots.iter().enumerate() {
            for b in &simple_roots[i + 1..] {
                if form.pair(a, b).is_positive() {
                    return bad(format!("simple roots {a} and {b} pair positively"));
                }
            }
        }
        let g = GroupData {
            rank,
            roots,
            simple_roots,
            form,
            label: label.into(),
            central_quotient: Vec::new(),
        };
        for s in &g.simple_roots {
            let image: HashSet<RationalVector> = g.roots.iter().map(|r| g.reflect(r, s)).collect();
            if image != g.roots.iter().cloned().collect() {
                return bad(format!("reflection in {s} does not preserve the roots"));
            }
            let basis: Vec<RationalVector> = (0..rank).map(|i| g.reflect(&RationalVector::unit(rank, i), s)).collect();
            for i in 0..rank {
                for j in 0..rank {
                    if g.form.pair(&basis[i], &basis[j]) != g.form.matrix()[i][j] {
                        return bad(format!("form is not invariant under reflection in {s}"));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[RationalVector] {
        &self.roots
    }

    pub fn simple_roots(&self) -> &[RationalVector] {
        &self.simple_roots
    }

    pub fn form(&self) -> &GramForm {
        &self.form
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_torus(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn central_quotient(&self) -> &[RationalVector] {
        &self.central_quotient
    }

    pub fn pair(&self, u: &RationalVector, v: &RationalVector) -> Rational {
        self.form.pair(u, v)
    }

    /// `v ↦ v − 2(v•r)/(r•r)·r`.
    pub fn reflect(&self, v: &RationalVector, root: &RationalVector) -> RationalVector {
        let k = Rational::from(2) * self.pair(v, root) / self.pair(root, root);
        v - &root.scale(&k)
    }

    /// Projects out the quotiented central directions (identity for `gl` and tori).
    pub fn reduce(&self, v: &RationalVector) -> RationalVector {
        if self.central_quotient.is_empty() {
            v.clone()
        } else {
            project_out_span(v, &self.central_quotient, &self.form)
        }
    }

    /// Dominant representative of the Weyl orbit of `v`.
    pub fn weyl_canonicalize(&self, v: &RationalVector) -> RationalVector {
        let mut v = v.clone();
        while let Some(r) = self.simple_roots.iter().find(|r| self.pair(&v, r).is_negative()) {
            v = self.reflect(&v, r);
        }
        v
    }

    /// `wt_{n⁻}(β)`: the sum of the negative `β`-weights on the Lie algebra.
    pub fn negative_root_weight_sum(&self, beta: &RationalVector) -> Rational {
        self.roots
            .iter()
            .map(|g| self.pair(g, beta))
            .filter(Rational::is_negative)
            .sum()
    }

    /// Roots pairing negatively with `beta`, with their pairings.
    pub fn negative_roots(&self, beta: &RationalVector) -> Vec<(RationalVector, Rational)> {
        self.roots
            .iter()
            .map(|g| (g.clone(), self.pair(g, beta)))
            .filter(|(_, w)| w.is_negative())
            .collect()
    }

    pub fn check_length(&self, v: &RationalVector, what: &str) -> Result<()> {
        if v.len() != self.rank {
            return Err(KnxError::InvalidParameter(format!(
                "{what} {v} has length {} but the group has rank {}",
                v.len(),
                self.rank
            )));
        }
        Ok(())
    }

    /// A Lie algebra character must vanish on every root.
    pub fn validate_lie_character(&self, c: &LieCharacter) -> Result<()> {
        for (name, v) in std::iter::once(("base", &c.base)).chain(c.direction.iter().map(|d| ("direction", d))) {
            self.check_length(v, "character")?;
            if let Some(g) = self.roots.iter().find(|g| !self.pair(v, g).is_zero()) {
                return Err(KnxError::InvalidCharacter(format!(
                    "{name} {v} does not vanish on the root {g}"
                )));
            }
        }
        Ok(())
    }
}

/// `dχ` for a character of the torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusCharacter {
    pub vector: RationalVector,
    /// Whether this is the differential of a genuine group character
    /// (integer entries) rather than a rational character.
    pub integral: bool,
}

impl TorusCharacter {
    pub fn new(vector: RationalVector) -> Result<Self> {
        if !vector.coords().iter().all(Rational::is_integer) {
            return Err(KnxError::InvalidCharacter(format!(
                "group character {vector} must have integer entries"
            )));
        }
        Ok(TorusCharacter { vector, integral: true })
    }

    pub fn rational(vector: RationalVector) -> Self {
        let integral = vector.coords().iter().all(Rational::is_integer);
        TorusCharacter { vector, integral }
    }
}

/// A character of the Lie algebra, `c = base + t·direction` when parametric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieCharacter {
    pub base: RationalVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<RationalVector>,
}

impl LieCharacter {
    pub fn fixed(base: RationalVector) -> Self {
        LieCharacter { base, direction: None }
    }

    pub fn parametric(base: RationalVector, direction: RationalVector) -> Self {
        LieCharacter {
            base,
            direction: Some(direction),
        }
    }

    /// The fixed character at parameter `t`.
    pub fn at(&self, t: &Rational) -> LieCharacter {
        let base = match &self.direction {
            Some(d) => &self.base + &d.scale(t),
            None => self.base.clone(),
        };
        LieCharacter::fixed(base)
    }
}

/// The positive rational multiple of `v` with coprime integer entries.
pub fn primitive_rescale(v: &RationalVector) -> Result<RationalVector> {
    if v.is_zero() {
        return Err(KnxError::ZeroVector);
    }
    let l = lcm_denominators(v.coords());
    let ints: Vec<BigInt> = v
        .coords()
        .iter()
        .map(|x| (x * &Rational::from_integer(l.clone())).to_bigint().expect("cleared denominators"))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(RationalVector::new(
        ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect(),
    ))
}
