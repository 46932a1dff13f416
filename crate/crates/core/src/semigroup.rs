//! Numerical semigroups of rational generators and the affine sets they cut out.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KnxError, Result};
use crate::scalar::{lcm_denominators, Rational};

/// Largest table the gap computation may allocate.
pub const DP_CAP: usize = 1 << 24;

/// Nonnegative integer combinations of positive rational generators.
///
/// The generators are `scale·content·a_i` with coprime integers `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GeneratorList")]
pub struct NumericalSemigroup {
    generators: Vec<Rational>,
    scale: Rational,
    content: u64,
    reduced: Vec<u64>,
    /// Gaps and conductor of `⟨a_i⟩`.
    coprime_gaps: Vec<u64>,
    coprime_conductor: u64,
    /// `via[k]` is a generator index usable in a decomposition of `k`.
    #[serde(skip)]
    via: Vec<Option<u32>>,
}

#[derive(Deserialize)]
struct GeneratorList {
    generators: Vec<Rational>,
}

impl TryFrom<GeneratorList> for NumericalSemigroup {
    type Error = KnxError;

    fn try_from(list: GeneratorList) -> Result<Self> {
        NumericalSemigroup::from_generators(&list.generators)
    }
}

/// `shift + Σ count·generator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub shift: Rational,
    pub terms: Vec<WitnessTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub generator: Rational,
    #[serde(with = "decimal")]
    pub count: BigInt,
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

impl Witness {
    pub fn value(&self) -> Rational {
        let mut v = self.shift.clone();
        for t in &self.terms {
            v += &(&t.generator * &Rational::from_integer(t.count.clone()));
        }
        v
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shift)?;
        for t in &self.terms {
            write!(f, " + {}·{}", t.count, t.generator)?;
        }
        Ok(())
    }
}

impl NumericalSemigroup {
    /// Zero and negative values are ignored; with no positive generator the
    /// result is the trivial semigroup `{0}`.
    pub fn from_generators<'a>(gens: impl IntoIterator<Item = &'a Rational>) -> Result<Self> {
        let mut generators: Vec<Rational> = gens.into_iter().filter(|g| g.is_positive()).cloned().collect();
        generators.sort();
        generators.dedup();
        if generators.is_empty() {
            return Ok(NumericalSemigroup {
                generators,
                scale: Rational::one(),
                content: 0,
                reduced: Vec::new(),
                coprime_gaps: Vec::new(),
                coprime_conductor: 0,
                via: vec![None],
            });
        }
        let lcm = Rational::from_integer(lcm_denominators(&generators));
        let ints: Vec<BigInt> = generators
            .iter()
            .map(|g| (g * &lcm).to_bigint().expect("denominators cleared"))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let too_big = |what| KnxError::CapExceeded { what, count: usize::MAX, cap: DP_CAP };
        let content = g.to_u64().ok_or_else(|| too_big("semigroup content"))?;
        let reduced: Vec<u64> = ints
            .iter()
            .map(|x| (x / &g).to_u64().ok_or_else(|| too_big("semigroup generator")))
            .collect::<Result<_>>()?;
        let (gaps, conductor, via) = gap_table(&reduced)?;
        Ok(NumericalSemigroup {
            generators,
            scale: lcm.recip().expect("lcm is positive"),
            content,
            reduced,
            coprime_gaps: gaps,
            coprime_conductor: conductor,
            via,
        })
    }

    pub fn generators(&self) -> &[Rational] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn content(&self) -> u64 {
        self.content
    }

    /// Spacing of the lattice containing the semigroup, `scale·content`; zero when trivial.
    pub fn step(&self) -> Rational {
        &self.scale * &Rational::from(self.content as i64)
    }

    pub fn reduced_generators(&self) -> &[u64] {
        &self.reduced
    }

    /// Non-members of `content·ℤ≥0`, in units of [`Self::scale`].
    pub fn gaps(&self) -> Vec<u64> {
        self.coprime_gaps.iter().map(|g| g * self.content).collect()
    }

    /// Least `c` such that `c + content·ℤ≥0` lies in the semigroup, in units of [`Self::scale`].
    pub fn conductor(&self) -> u64 {
        self.coprime_conductor * self.content
    }

    /// Gaps in units of [`Self::step`].
    pub fn coprime_gaps(&self) -> &[u64] {
        &self.coprime_gaps
    }

    /// Conductor in units of [`Self::step`].
    pub fn coprime_conductor(&self) -> u64 {
        self.coprime_conductor
    }

    /// Whether `k·step` is a member.
    pub fn contains_index(&self, k: &BigInt) -> bool {
        if k.sign() == num_bigint::Sign::Minus {
            return false;
        }
        if self.is_trivial() {
            return k.is_zero();
        }
        match k.to_u64() {
            Some(k) => k >= self.coprime_conductor || self.coprime_gaps.binary_search(&k).is_err(),
            None => true,
        }
    }

    /// The index `k` with `x = k·step`, if any.
    fn index_of(&self, x: &Rational) -> Option<BigInt> {
        if self.is_trivial() {
            return x.is_zero().then(BigInt::zero);
        }
        (x / &self.step()).to_bigint()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.index_of(x).is_some_and(|k| self.contains_index(&k))
    }

    /// `value ∈ shift + S`.
    pub fn membership(&self, shift: &Rational, value: &Rational) -> bool {
        self.contains(&(value - shift))
    }

    /// A decomposition of `value − shift` into generators, when it is a member.
    pub fn witness(&self, shift: &Rational, value: &Rational) -> Option<Witness> {
        let k = self.index_of(&(value - shift))?;
        if !self.contains_index(&k) {
            return None;
        }
        let mut counts = vec![BigInt::zero(); self.reduced.len()];
        let mut rest = k;
        if !self.reduced.is_empty() {
            // Peel off the smallest generator until the table covers the remainder.
            let a = BigInt::from(self.reduced[0]);
            let limit = BigInt::from(self.via.len() - 1);
            if rest > limit {
                let peel = (&rest - &limit + &a - 1u32) / &a;
                rest -= &peel * &a;
                counts[0] += peel;
            }
        }
        let mut r = rest.to_usize().expect("remainder fits the table");
        while r > 0 {
            let i = self.via[r].expect("member has a table entry") as usize;
            counts[i] += 1u32;
            r -= self.reduced[i] as usize;
        }
        let terms = counts
            .into_iter()
            .zip(&self.generators)
            .filter(|(c, _)| !c.is_zero())
            .map(|(count, g)| WitnessTerm { generator: g.clone(), count })
            .collect();
        Some(Witness { shift: shift.clone(), terms })
    }

    /// `shift + S`.
    pub fn describe(&self, shift: &Rational) -> SetDescription {
        SetDescription {
            offset: shift.clone(),
            modulus: self.step(),
            gaps: self.coprime_gaps.clone(),
            conductor: self.coprime_conductor,
            empty: false,
            universal: false,
        }
    }
}

/// Gaps, conductor and a decomposition table covering `[0, conductor + min]`.
fn gap_table(gens: &[u64]) -> Result<(Vec<u64>, u64, Vec<Option<u32>>)> {
    let a = gens[0] as usize;
    let max = *gens.last().expect("nonempty") as usize;
    // Schur: the Frobenius number is below (a − 1)(max − 1).
    let bound = (a - 1).saturating_mul(max.saturating_sub(1)) + 2 * a + 1;
    if bound > DP_CAP {
        return Err(KnxError::CapExceeded {
            what: "semigroup table",
            count: bound,
            cap: DP_CAP,
        });
    }
    let mut via: Vec<Option<u32>> = vec![None; 1];
    let mut member = vec![true];
    let mut gaps = Vec::new();
    let mut run = 1usize;
    let mut k = 0usize;
    while run <= a {
        k += 1;
        let hit = gens
            .iter()
            .enumerate()
            .find(|(_, &g)| (g as usize) <= k && member[k - g as usize])
            .map(|(i, _)| i as u32);
        member.push(hit.is_some());
        via.push(hit);
        if hit.is_some() {
            run += 1;
        } else {
            run = 0;
            gaps.push(k as u64);
        }
    }
    let conductor = gaps.last().map_or(0, |g| g + 1);
    via.truncate(conductor as usize + a + 1);
    Ok((gaps, conductor, via))
}

/// `{offset + modulus·k : k ∈ ℤ≥0, k ∉ gaps}`, where every `k ≥ conductor`
/// is allowed. A zero modulus denotes the single point `{offset}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDescription {
    pub offset: Rational,
    pub modulus: Rational,
    pub gaps: Vec<u64>,
    pub conductor: u64,
    pub empty: bool,
    #[serde(default)]
    pub universal: bool,
}

impl SetDescription {
    pub fn empty() -> Self {
        SetDescription {
            offset: Rational::zero(),
            modulus: Rational::zero(),
            gaps: Vec::new(),
            conductor: 0,
            empty: true,
            universal: false,
        }
    }

    pub fn universal() -> Self {
        SetDescription {
            universal: true,
            empty: false,
            ..SetDescription::empty()
        }
    }

    pub fn point(offset: Rational) -> Self {
        SetDescription {
            offset,
            empty: false,
            ..SetDescription::empty()
        }
    }

    /// `offset + modulus·ℤ≥0` with no gaps.
    pub fn ray(offset: Rational, modulus: Rational) -> Self {
        SetDescription {
            offset,
            modulus,
            empty: false,
            ..SetDescription::empty()
        }
    }

    fn is_point(&self) -> bool {
        !self.empty && !self.universal && self.modulus.is_zero()
    }

    fn allows(&self, k: &BigInt) -> bool {
        if k.sign() == num_bigint::Sign::Minus {
            return false;
        }
        match k.to_u64() {
            Some(k) => k >= self.conductor || self.gaps.binary_search(&k).is_err(),
            None => true,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.empty {
            return false;
        }
        if self.universal {
            return true;
        }
        let d = x - &self.offset;
        if self.modulus.is_zero() {
            return d.is_zero();
        }
        (&d / &self.modulus).to_bigint().is_some_and(|k| self.allows(&k))
    }

    /// `{t : a + b·t ∈ self}`.
    pub fn affine_preimage(&self, a: &Rational, b: &Rational) -> SetDescription {
        if self.empty {
            return SetDescription::empty();
        }
        if self.universal {
            return SetDescription::universal();
        }
        match b.recip() {
            None if self.contains(a) => SetDescription::universal(),
            None => SetDescription::empty(),
            Some(inv) => SetDescription {
                offset: &(&self.offset - a) * &inv,
                modulus: &self.modulus * &inv,
                ..self.clone()
            },
        }
    }

    /// Exact test of `self ⊆ other`.
    pub fn is_subset_of(&self, other: &SetDescription) -> bool {
        if self.empty || other.universal {
            return true;
        }
        if self.universal || other.empty {
            return false;
        }
        if self.is_point() {
            return other.contains(&self.offset);
        }
        if other.is_point() {
            return false;
        }
        // Both are infinite rays; `self` eventually steps by its modulus, so
        // the ratio must be a positive integer `r` and the offset difference a
        // nonnegative integer multiple `j0` of `other.modulus`.
        let ratio = &self.modulus / &other.modulus;
        let Some(r) = ratio.to_bigint().filter(|r| r.sign() == num_bigint::Sign::Plus) else {
            return false;
        };
        let Some(j0) = ((&self.offset - &other.offset) / &other.modulus).to_bigint() else {
            return false;
        };
        // Past `last`, every allowed k of `self` lands above `other`'s conductor.
        let needed = BigInt::from(other.conductor) - &j0;
        let past = if needed.sign() == num_bigint::Sign::Plus {
            needed.div_ceil(&r)
        } else {
            BigInt::zero()
        };
        let last = past.max(BigInt::from(self.conductor));
        let mut k = BigInt::zero();
        while k <= last {
            if self.allows(&k) && !other.allows(&(&j0 + &r * &k)) {
                return false;
            }
            k += 1u32;
        }
        true
    }
}

impl fmt::Display for SetDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "∅");
        }
        if self.universal {
            return write!(f, "ℚ");
        }
        if self.modulus.is_zero() {
            return write!(f, "{{{}}}", self.offset);
        }
        let m = self.modulus.abs();
        let lattice = if m == Rational::one() {
            "ℤ≥0".to_string()
        } else {
            format!("({m})ℤ≥0")
        };
        match (self.offset.is_zero(), self.modulus.is_negative()) {
            (true, false) => write!(f, "{lattice}")?,
            (true, true) => write!(f, "-{lattice}")?,
            (false, false) => write!(f, "{} + {lattice}", self.offset)?,
            (false, true) => write!(f, "{} - {lattice}", self.offset)?,
        }
        if !self.gaps.is_empty() {
            let values: Vec<String> = self
                .gaps
                .iter()
                .map(|&k| (&self.offset + &(&self.modulus * &Rational::from(k as i64))).to_string())
                .collect();
            write!(f, " minus {{{}}}", values.join(", "))?;
        }
        Ok(())
    }
}

/// Drops empty members and members contained in another; a universal member absorbs everything.
pub fn simplify_union(sets: &[SetDescription]) -> Vec<SetDescription> {
    if let Some(u) = sets.iter().find(|s| s.universal) {
        return vec![u.clone()];
    }
    let live: Vec<&SetDescription> = sets.iter().filter(|s| !s.empty).collect();
    let mut out: Vec<SetDescription> = Vec::new();
    for (i, s) in live.iter().enumerate() {
        let absorbed = live.iter().enumerate().any(|(j, t)| {
            i != j && s.is_subset_of(t) && (!t.is_subset_of(s) || j < i)
        });
        if !absorbed {
            out.push((*s).clone());
        }
    }
    out
}

pub fn render_union(sets: &[SetDescription]) -> String {
    match sets {
        [] => "∅".to_string(),
        [one] => one.to_string(),
        many => many.iter().map(|s| format!("({s})")).collect::<Vec<_>>().join(" ∪ "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    fn sg(xs: &[i64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(&ints(xs)).unwrap()
    }

    #[test]
    fn gap_examples() {
        let one = sg(&[1]);
        assert!(one.gaps().is_empty());
        assert_eq!(one.conductor(), 0);
        let s = sg(&[2, 3]);
        assert_eq!(s.gaps(), vec![1]);
        assert_eq!(s.conductor(), 2);
        let s = sg(&[4, 6]);
        assert_eq!(s.content(), 2);
        assert_eq!(s.gaps(), vec![2]);
        assert_eq!(s.conductor(), 4);
        assert_eq!(s.coprime_gaps(), &[1]);
        let members: Vec<i64> = (0..12).filter(|&x| s.contains(&Rational::from(x))).collect();
        assert_eq!(members, vec![0, 4, 6, 8, 10]);
        let s = sg(&[5, 7]);
        assert_eq!(s.conductor(), 24);
    }

    #[test]
    fn membership_examples() {
        let one = sg(&[1]);
        assert!(one.membership(&q(1, 2), &q(5, 2)));
        assert!(!one.membership(&q(1, 2), &q(1, 3)));
        assert!(!sg(&[2, 3]).membership(&Rational::zero(), &Rational::one()));
        let half = NumericalSemigroup::from_generators(&[q(1, 2)]).unwrap();
        assert_eq!(half.scale(), &q(1, 2));
        assert!(half.membership(&Rational::one(), &q(5, 2)));
    }

    #[test]
    fn trivial_semigroup() {
        let s = NumericalSemigroup::from_generators(&[Rational::zero()]).unwrap();
        assert!(s.is_trivial());
        assert!(s.membership(&q(1, 2), &q(1, 2)));
        assert!(!s.membership(&q(1, 2), &q(3, 2)));
        assert_eq!(s.describe(&q(1, 2)).to_string(), "{1/2}");
        assert_eq!(s.witness(&q(1, 2), &q(1, 2)).unwrap().terms, vec![]);
    }

    #[test]
    fn witnesses_reverify() {
        let s = sg(&[5, 7]);
        for v in [0i64, 5, 7, 12, 24, 25, 1000] {
            let w = s.witness(&Rational::zero(), &Rational::from(v)).unwrap();
            assert_eq!(w.value(), Rational::from(v));
        }
        assert!(s.witness(&Rational::zero(), &Rational::from(23)).is_none());
        let big = Rational::from_integer(BigInt::from(10).pow(30));
        assert_eq!(s.witness(&Rational::zero(), &big).unwrap().value(), big);
    }

    #[test]
    fn rendering() {
        assert_eq!(sg(&[1]).describe(&q(1, 2)).to_string(), "1/2 + ℤ≥0");
        let half = NumericalSemigroup::from_generators(&[q(1, 2)]).unwrap();
        assert_eq!(half.describe(&Rational::one()).to_string(), "1 + (1/2)ℤ≥0");
        assert_eq!(sg(&[2, 3]).describe(&Rational::zero()).to_string(), "ℤ≥0 minus {1}");
        let mirror = SetDescription::ray(q(-1, 2), q(-1, 2));
        assert_eq!(mirror.to_string(), "-1/2 - (1/2)ℤ≥0");
    }

    #[test]
    fn preimage_and_union() {
        let d = sg(&[1]).describe(&Rational::one());
        // 2t ∈ 1 + ℤ≥0
        let t = d.affine_preimage(&Rational::zero(), &Rational::from(2));
        assert_eq!(t, SetDescription::ray(q(1, 2), q(1, 2)));
        let t1 = sg(&[1]).describe(&q(1, 2));
        assert!(t1.is_subset_of(&t));
        assert!(!t.is_subset_of(&t1));
        assert_eq!(simplify_union(&[t1.clone(), t.clone()]), vec![t.clone()]);
        assert_eq!(simplify_union(&[t.clone(), t.clone()]), vec![t.clone()]);
        assert_eq!(
            d.affine_preimage(&Rational::one(), &Rational::zero()),
            SetDescription::universal()
        );
        assert_eq!(d.affine_preimage(&q(1, 2), &Rational::zero()), SetDescription::empty());
        let gappy = sg(&[2, 3]).describe(&Rational::zero());
        assert!(gappy.is_subset_of(&SetDescription::ray(Rational::zero(), Rational::one())));
        assert!(!SetDescription::ray(Rational::zero(), Rational::one()).is_subset_of(&gappy));
        assert!(SetDescription::ray(Rational::from(2), Rational::one()).is_subset_of(&gappy));
        assert!(SetDescription::point(Rational::from(3)).is_subset_of(&gappy));
        assert!(!SetDescription::point(Rational::from(1)).is_subset_of(&gappy));
    }

    #[test]
    fn json_shape() {
        let d = sg(&[2, 3]).describe(&q(1, 2));
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["offset"], "1/2");
        assert_eq!(v["modulus"], "1");
        assert_eq!(v["gaps"], serde_json::json!([1]));
        assert_eq!(v["conductor"], 2);
        assert_eq!(v["empty"], false);
        let back: SetDescription = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
        let s = sg(&[4, 6]);
        let back: NumericalSemigroup = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
