//! Enumeration of the Kirwan-Ness one-parameter subgroups of a representation.
//!
//! The weights `A = {α₀ = 0} ∪ {α_i}` are perturbed to `α_i + ελ` with
//! `λ = dχ` and `ε < 0` infinitesimal. A stratum meeting the representation
//! has a defining weight subset containing `α₀`; its closest point to the
//! origin only depends on the span of the subset once the subset is taken
//! maximal in that span, so the enumeration walks the lattice of spans
//! (flats) generated by the weights and solves one min-norm problem per flat.
//!
//! Indices into `stratify_weights ∪ {α₀}` use `0` for `α₀` and `i + 1` for
//! `stratify_weights[i]`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{min_norm_point_with_cap, Polytope};
use crate::error::{KnxError, Result};
use crate::group::{primitive_rescale, GroupData, TorusCharacter};
use crate::linalg;
use crate::scalar::{Rational, Sign};
use crate::vector::{project_out_span, EpsVector, RationalVector};

pub const DEFAULT_SUBSET_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// Weights of `W`; strata are computed on `T*W`.
    Cotangent,
    /// Weights of the full space to stratify.
    Raw,
}

/// Which sign of the destabilizing direction labels a stratum. The closest
/// point is `ε·v` with `ε < 0`, so `Negative` reports `primitive(−v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Negative,
    Positive,
    Both,
}

impl Orientation {
    /// Signs `s` such that `β = primitive(s·v)`.
    fn signs(self) -> &'static [i64] {
        match self {
            Orientation::Negative => &[-1],
            Orientation::Positive => &[1],
            Orientation::Both => &[-1, 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSystem {
    w_weights: Vec<RationalVector>,
    mode: WeightMode,
}

impl WeightSystem {
    pub fn new(w_weights: Vec<RationalVector>, mode: WeightMode) -> Result<Self> {
        let first = w_weights
            .first()
            .ok_or_else(|| KnxError::InvalidParameter("at least one weight is required".into()))?;
        let n = first.len();
        if let Some(w) = w_weights.iter().find(|w| w.len() != n) {
            return Err(KnxError::DimensionMismatch { expected: n, got: w.len() });
        }
        Ok(WeightSystem { w_weights, mode })
    }

    pub fn cotangent(w_weights: Vec<RationalVector>) -> Result<Self> {
        WeightSystem::new(w_weights, WeightMode::Cotangent)
    }

    pub fn raw(w_weights: Vec<RationalVector>) -> Result<Self> {
        WeightSystem::new(w_weights, WeightMode::Raw)
    }

    pub fn w_weights(&self) -> &[RationalVector] {
        &self.w_weights
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn rank(&self) -> usize {
        self.w_weights[0].len()
    }

    /// Cotangent mode: `w_weights` followed by their negatives. Raw mode: `w_weights`.
    pub fn stratify_weights(&self) -> Vec<RationalVector> {
        match self.mode {
            WeightMode::Raw => self.w_weights.clone(),
            WeightMode::Cotangent => self
                .w_weights
                .iter()
                .cloned()
                .chain(self.w_weights.iter().map(|w| -w))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnConfig {
    /// Maximum number of distinct weights, `α₀` included.
    pub subset_cap: usize,
    pub orientation: Orientation,
}

impl Default for KnConfig {
    fn default() -> Self {
        KnConfig {
            subset_cap: DEFAULT_SUBSET_CAP,
            orientation: Orientation::Negative,
        }
    }
}

impl KnConfig {
    pub fn with_orientation(orientation: Orientation) -> Self {
        KnConfig {
            orientation,
            ..Default::default()
        }
    }
}

/// Indices of `stratify_weights` grouped by the sign of their pairing with `β`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WeightSplit {
    pub plus: Vec<usize>,
    pub zero: Vec<usize>,
    pub minus: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnStratum {
    /// Signed primitive label.
    pub beta: RationalVector,
    pub beta_dominant: RationalVector,
    /// Support of the min-norm certificate, as indices into `stratify_weights ∪ {α₀}`.
    pub defining_subset: Vec<usize>,
    /// `v` with closest point `ε·v`, before rescaling.
    pub closest_direction: RationalVector,
    /// `q(v)`.
    pub q_norm: Rational,
    pub split: WeightSplit,
    /// `Z_β = V₀(β)`.
    pub z_indices: Vec<usize>,
    /// `Y_β = V₊(β) × V₀(β)`.
    pub y_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnResult {
    pub strata: Vec<KnStratum>,
    pub semistable_nonempty: bool,
}

impl KnResult {
    pub fn find(&self, beta: &RationalVector) -> Option<usize> {
        self.strata.iter().position(|s| &s.beta == beta)
    }

    pub fn dominant_set(&self) -> Vec<RationalVector> {
        let mut v: Vec<_> = self.strata.iter().map(|s| s.beta_dominant.clone()).collect();
        v.sort();
        v
    }
}

/// Distinct weight vectors with `α₀ = 0` first, and for each the labels it carries.
#[derive(Debug, Clone)]
struct Arrangement {
    vertices: Vec<RationalVector>,
    labels: Vec<Vec<usize>>,
    lambda: RationalVector,
}

impl Arrangement {
    fn build(ws: &WeightSystem, chi: &TorusCharacter, group: &GroupData, cap: usize) -> Result<Self> {
        let rank = group.rank();
        if ws.rank() != rank {
            return Err(KnxError::DimensionMismatch { expected: rank, got: ws.rank() });
        }
        group.check_length(&chi.vector, "character")?;
        let mut vertices = vec![RationalVector::zeros(rank)];
        let mut labels = vec![vec![0]];
        let mut index: HashMap<RationalVector, usize> = HashMap::new();
        index.insert(vertices[0].clone(), 0);
        for (i, w) in ws.stratify_weights().iter().enumerate() {
            let w = group.reduce(w);
            let k = *index.entry(w.clone()).or_insert_with(|| {
                vertices.push(w);
                labels.push(Vec::new());
                vertices.len() - 1
            });
            labels[k].push(i + 1);
        }
        if vertices.len() > cap {
            return Err(KnxError::CapExceeded {
                what: "distinct weights (with the affine-cone weight)",
                count: vertices.len(),
                cap,
            });
        }
        Ok(Arrangement {
            vertices,
            labels,
            lambda: group.reduce(&chi.vector),
        })
    }

    /// Every span generated by a subset of the weights, as the sorted list of
    /// vertices it contains, in breadth-first order from the zero span.
    fn flats(&self) -> Vec<Vec<usize>> {
        let m = self.vertices.len();
        let closure = |basis: &[Vec<Rational>]| -> Vec<usize> {
            let r = basis.len();
            (0..m)
                .filter(|&k| {
                    let mut rows = basis.to_vec();
                    rows.push(self.vertices[k].coords().to_vec());
                    linalg::rank(&rows) == r
                })
                .collect()
        };
        let mut out = Vec::new();
        let mut seen: HashSet<Vec<Vec<Rational>>> = HashSet::new();
        let mut queue = VecDeque::new();
        let start = closure(&[]);
        seen.insert(Vec::new());
        queue.push_back((Vec::<Vec<Rational>>::new(), start));
        while let Some((basis, members)) = queue.pop_front() {
            for k in 0..m {
                if members.contains(&k) {
                    continue;
                }
                let mut rows = basis.clone();
                rows.push(self.vertices[k].coords().to_vec());
                let (key, _) = linalg::rref(&rows);
                if !seen.insert(key.clone()) {
                    continue;
                }
                let next = closure(&key);
                queue.push_back((key, next));
            }
            out.push(members);
        }
        out
    }
}

/// Min-norm outcome for one span class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatResult {
    /// Labels (`0` for `α₀`) of every weight lying in the span.
    pub labels: Vec<usize>,
    /// The distinct weight vectors of the span, `α₀` first.
    pub vertices: Vec<RationalVector>,
    /// Closest point of the perturbed hull of `vertices`.
    pub point: EpsVector,
    /// Certificate support, as labels.
    pub support_labels: Vec<usize>,
    /// Certificate support, as distinct weight vectors.
    pub support_vertices: Vec<RationalVector>,
}

/// One min-norm problem per span of weights (subsets deduplicated by span).
pub fn flat_results(
    ws: &WeightSystem,
    chi: &TorusCharacter,
    group: &GroupData,
    config: &KnConfig,
) -> Result<(Vec<FlatResult>, RationalVector)> {
    let arr = Arrangement::build(ws, chi, group, config.subset_cap)?;
    let flats = arr.flats();
    let results = flats
        .par_iter()
        .map(|members| {
            let vertices: Vec<RationalVector> = members.iter().map(|&k| arr.vertices[k].clone()).collect();
            let poly = Polytope::perturbed(&vertices, &arr.lambda, group.form().clone())?;
            let cert = min_norm_point_with_cap(&poly, config.subset_cap)?;
            let support_vertices: Vec<RationalVector> = cert.support.iter().map(|&i| vertices[i].clone()).collect();
            let support_labels = cert.support.iter().map(|&i| arr.labels[members[i]][0]).collect();
            let mut labels: Vec<usize> = members.iter().flat_map(|&k| arr.labels[k].iter().copied()).collect();
            labels.sort_unstable();
            Ok(FlatResult {
                labels,
                vertices,
                point: cert.point,
                support_labels,
                support_vertices,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((results, arr.lambda))
}

fn split_for(beta: &RationalVector, stratify: &[RationalVector], group: &GroupData) -> WeightSplit {
    let mut split = WeightSplit::default();
    for (i, a) in stratify.iter().enumerate() {
        match group.pair(a, beta).sign() {
            Sign::Positive => split.plus.push(i),
            Sign::Zero => split.zero.push(i),
            Sign::Negative => split.minus.push(i),
        }
    }
    split
}

/// Enumerates the KN one-parameter subgroups whose strata meet the representation.
pub fn enumerate_kn(
    ws: &WeightSystem,
    chi: &TorusCharacter,
    group: &GroupData,
    config: &KnConfig,
) -> Result<KnResult> {
    let (flats, lambda) = flat_results(ws, chi, group, config)?;
    let stratify = ws.stratify_weights();
    let mut semistable_nonempty = false;
    // beta_dominant -> (candidate beta, defining subset, direction)
    let mut classes: BTreeMap<RationalVector, (RationalVector, Vec<usize>, RationalVector)> = BTreeMap::new();

    for flat in &flats {
        if flat.point.is_zero() {
            semistable_nonempty = true;
            continue;
        }
        if !flat.point.constant.is_zero() {
            // Closest point bounded away from 0: the stratum misses V.
            continue;
        }
        let v = flat.point.linear.clone();
        let expected = project_out_span(&lambda, &flat.support_vertices, group.form());
        if expected != v {
            return Err(KnxError::InternalInconsistency(format!(
                "closest point ε{v} differs from the projection ε{expected} of λ off the support span"
            )));
        }
        for &s in config.orientation.signs() {
            let beta = primitive_rescale(&v.scale(&Rational::from(s)))?;
            let dominant = group.weyl_canonicalize(&beta);
            classes
                .entry(dominant)
                .and_modify(|entry| {
                    if beta < entry.0 {
                        entry.0 = beta.clone();
                    }
                })
                .or_insert_with(|| (beta.clone(), flat.support_labels.clone(), v.clone()));
        }
    }

    let mut strata: Vec<KnStratum> = classes
        .into_iter()
        .map(|(beta_dominant, (beta, defining_subset, v))| {
            let split = split_for(&beta, &stratify, group);
            let z_indices = split.zero.clone();
            let mut y_indices: Vec<usize> = split.plus.iter().chain(&split.zero).copied().collect();
            y_indices.sort_unstable();
            KnStratum {
                q_norm: group.form().norm2(&v),
                beta,
                beta_dominant,
                defining_subset,
                closest_direction: v,
                split,
                z_indices,
                y_indices,
            }
        })
        .collect();
    strata.sort_by(|a, b| a.q_norm.cmp(&b.q_norm).then_with(|| a.beta_dominant.cmp(&b.beta_dominant)));
    Ok(KnResult {
        strata,
        semistable_nonempty,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointClass {
    Semistable,
    Stratum { index: usize, beta: RationalVector },
}

/// Stratum of a point of a torus representation whose nonzero coordinates are
/// `support` (indices into `stratify_weights`).
pub fn classify_point(
    support: &[usize],
    ws: &WeightSystem,
    chi: &TorusCharacter,
    group: &GroupData,
    config: &KnConfig,
) -> Result<PointClass> {
    if !group.is_torus() {
        return Err(KnxError::NonabelianUnsupported);
    }
    let stratify = ws.stratify_weights();
    let mut vertices = vec![RationalVector::zeros(group.rank())];
    for &i in support {
        let w = stratify.get(i).ok_or_else(|| {
            KnxError::InvalidParameter(format!("weight index {i} out of range ({} weights)", stratify.len()))
        })?;
        vertices.push(w.clone());
    }
    let poly = Polytope::perturbed(&vertices, &chi.vector, group.form().clone())?;
    let cert = min_norm_point_with_cap(&poly, config.subset_cap)?;
    if cert.point.is_zero() {
        return Ok(PointClass::Semistable);
    }
    if !cert.point.constant.is_zero() {
        return Err(KnxError::InternalInconsistency(
            "closest point of a hull containing ελ must vanish with ε".into(),
        ));
    }
    let sign = match config.orientation {
        Orientation::Positive => 1,
        Orientation::Negative | Orientation::Both => -1,
    };
    let beta = primitive_rescale(&cert.point.linear.scale(&Rational::from(sign)))?;
    let result = enumerate_kn(ws, chi, group, config)?;
    let index = result.find(&beta).ok_or_else(|| {
        KnxError::InternalInconsistency(format!("direction {beta} is not among the enumerated strata"))
    })?;
    Ok(PointClass::Stratum { index, beta })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    fn chi(xs: &[i64]) -> TorusCharacter {
        TorusCharacter::new(v(xs)).unwrap()
    }

    #[test]
    fn projective_space_single_stratum() {
        for n in 1..=3usize {
            let ws = WeightSystem::cotangent(vec![v(&[1]); n + 1]).unwrap();
            let g = GroupData::torus(1).unwrap();
            let r = enumerate_kn(&ws, &chi(&[1]), &g, &KnConfig::default()).unwrap();
            assert_eq!(r.strata.len(), 1);
            let s = &r.strata[0];
            assert_eq!(s.beta, v(&[-1]));
            let expected: Vec<usize> = (n + 1..2 * (n + 1)).collect();
            assert_eq!(s.y_indices, expected);
            assert!(s.z_indices.is_empty());
            assert!(r.semistable_nonempty);
        }
    }

    #[test]
    fn two_weight_torus_example() {
        let ws = WeightSystem::raw(vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        let g = GroupData::torus(2).unwrap();
        let r = enumerate_kn(&ws, &chi(&[0, 1]), &g, &KnConfig::default()).unwrap();
        assert!(!r.semistable_nonempty);
        let betas: Vec<_> = r.strata.iter().map(|s| s.beta.clone()).collect();
        assert_eq!(betas, vec![v(&[1, -1]), v(&[0, -1])]);
        let h = Rational::new(1, 2);
        assert_eq!(r.strata[0].closest_direction, RationalVector::new(vec![-h.clone(), h.clone()]));
        assert_eq!(r.strata[0].q_norm, h);

        let r = enumerate_kn(&ws, &chi(&[0, -1]), &g, &KnConfig::default()).unwrap();
        assert_eq!(r.strata.len(), 1);
        assert_eq!(r.strata[0].beta, v(&[0, 1]));
        assert_eq!(r.strata[0].closest_direction, v(&[0, -1]));
    }

    fn cherednik_weights(n: usize) -> Vec<RationalVector> {
        let e = |i| RationalVector::unit(n, i);
        let mut w = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    w.push(&e(i) - &e(j));
                }
            }
        }
        w.extend((0..n).map(|_| RationalVector::zeros(n)));
        w.extend((0..n).map(e));
        w
    }

    #[test]
    fn gl2_strata() {
        let ws = WeightSystem::cotangent(cherednik_weights(2)).unwrap();
        let g = GroupData::gl(2).unwrap();
        let pos = enumerate_kn(&ws, &chi(&[1, 1]), &g, &KnConfig::with_orientation(Orientation::Positive)).unwrap();
        assert_eq!(pos.dominant_set(), vec![v(&[1, 0]), v(&[1, 1])]);
        assert_eq!(pos.strata[0].beta_dominant, v(&[1, 0]));
        let neg = enumerate_kn(&ws, &chi(&[1, 1]), &g, &KnConfig::default()).unwrap();
        assert_eq!(neg.dominant_set(), vec![v(&[-1, -1]), v(&[0, -1])]);
        let both = enumerate_kn(&ws, &chi(&[1, 1]), &g, &KnConfig::with_orientation(Orientation::Both)).unwrap();
        assert_eq!(both.strata.len(), 4);
    }

    #[test]
    fn classify_examples() {
        let g = GroupData::torus(2).unwrap();
        let ws = WeightSystem::raw(vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        let cfg = KnConfig::default();
        let origin = classify_point(&[], &ws, &chi(&[0, 1]), &g, &cfg).unwrap();
        assert!(matches!(origin, PointClass::Stratum { ref beta, .. } if *beta == v(&[0, -1])));
        let first = classify_point(&[0], &ws, &chi(&[0, 1]), &g, &cfg).unwrap();
        assert!(matches!(first, PointClass::Stratum { ref beta, .. } if *beta == v(&[0, -1])));
        let second = classify_point(&[1], &ws, &chi(&[0, 1]), &g, &cfg).unwrap();
        assert!(matches!(second, PointClass::Stratum { ref beta, .. } if *beta == v(&[1, -1])));

        // conv{ε, 1+ε, -1+ε} contains the origin.
        let g1 = GroupData::torus(1).unwrap();
        let ws1 = WeightSystem::cotangent(vec![v(&[1])]).unwrap();
        assert_eq!(classify_point(&[0, 1], &ws1, &chi(&[1]), &g1, &cfg).unwrap(), PointClass::Semistable);

        let gl = GroupData::gl(2).unwrap();
        assert_eq!(
            classify_point(&[], &ws, &chi(&[1, 1]), &gl, &cfg),
            Err(KnxError::NonabelianUnsupported)
        );
    }

    #[test]
    fn subset_cap() {
        let ws = WeightSystem::raw((1..=30).map(|i| v(&[i])).collect()).unwrap();
        let g = GroupData::torus(1).unwrap();
        assert!(matches!(
            enumerate_kn(&ws, &chi(&[1]), &g, &KnConfig::default()),
            Err(KnxError::CapExceeded { .. })
        ));
    }

    #[test]
    fn flats_of_gl2_weights() {
        let ws = WeightSystem::cotangent(cherednik_weights(2)).unwrap();
        let g = GroupData::gl(2).unwrap();
        let (flats, _) = flat_results(&ws, &chi(&[1, 1]), &g, &KnConfig::default()).unwrap();
        // zero span, the lines through e1, e2 and e1-e2, and the plane.
        assert_eq!(flats.len(), 5);
    }
}
