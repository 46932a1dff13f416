//! Brute-force cross-checks at concrete values of `ε`.
//!
//! The oracle substitutes a small negative rational for `ε`, finds flats from
//! independent weight subsets rather than by closure search, and computes each
//! min-norm point by solving every candidate support and keeping the global
//! minimum. Only the exact arithmetic is shared with the symbolic path.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::DEFAULT_VERTEX_CAP;
use crate::error::{KnxError, Result};
use crate::exactness::ExactnessProblem;
use crate::group::{primitive_rescale, GroupData, LieCharacter, TorusCharacter};
use crate::kn::{flat_results, Orientation, WeightSystem};
use crate::linalg;
use crate::scalar::Rational;
use crate::vector::{GramForm, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub epsilon_values: Vec<Rational>,
    pub sample_count: usize,
    pub rng_seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig::from_eps_den(20)
    }
}

impl OracleConfig {
    /// `ε ∈ {−2⁻ᵏ, −2⁻⁽ᵏ⁺⁴⁾}`.
    pub fn from_eps_den(k: u32) -> Self {
        OracleConfig {
            epsilon_values: vec![-Rational::pow2_recip(k), -Rational::pow2_recip(k + 4)],
            sample_count: 0,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon_values.len() < 2 {
            return Err(KnxError::InvalidParameter("at least two values of ε are needed".into()));
        }
        if let Some(e) = self.epsilon_values.iter().find(|e| !e.is_negative()) {
            return Err(KnxError::InvalidParameter(format!("ε = {e} must be negative")));
        }
        Ok(())
    }
}

/// Exact closest point to the origin of `conv(vertices)`, by trying every
/// affinely independent support.
pub fn numeric_min_norm(vertices: &[RationalVector], q: &GramForm) -> Result<RationalVector> {
    numeric_min_norm_with_cap(vertices, q, DEFAULT_VERTEX_CAP)
}

pub fn numeric_min_norm_with_cap(vertices: &[RationalVector], q: &GramForm, cap: usize) -> Result<RationalVector> {
    if vertices.is_empty() {
        return Err(KnxError::InvalidParameter("empty vertex set".into()));
    }
    if vertices.len() > cap {
        return Err(KnxError::CapExceeded { what: "oracle vertices", count: vertices.len(), cap });
    }
    let max_support = (q.rank() + 1).min(vertices.len());
    let mut best: Option<(Rational, RationalVector)> = None;
    for size in 1..=max_support {
        for support in (0..vertices.len()).combinations(size) {
            let Some(x) = support_minimizer(vertices, &support, q) else {
                continue;
            };
            let n = q.norm2(&x);
            if best.as_ref().is_none_or(|(b, _)| n < *b) {
                best = Some((n, x));
            }
        }
    }
    Ok(best.expect("singletons are always feasible").1)
}

/// Minimizer of the norm on the affine hull of `support`, if it is unique and
/// lies in the convex hull.
fn support_minimizer(vertices: &[RationalVector], support: &[usize], q: &GramForm) -> Option<RationalVector> {
    let k = support.len();
    // [G 1; 1ᵀ 0] [t; μ] = [0; 1]
    let mut system: Vec<Vec<Rational>> = support
        .iter()
        .map(|&i| {
            let mut row: Vec<Rational> = support.iter().map(|&j| q.pair(&vertices[i], &vertices[j])).collect();
            row.push(Rational::one());
            row
        })
        .collect();
    let mut last = vec![Rational::one(); k];
    last.push(Rational::zero());
    system.push(last);
    let mut rhs = vec![Rational::zero(); k];
    rhs.push(Rational::one());
    let solution = linalg::solve_unique(&system, &[rhs])?.pop()?;
    let t = &solution[..k];
    if t.iter().any(Rational::is_negative) {
        return None;
    }
    let mut x = RationalVector::zeros(q.rank());
    for (coef, &i) in t.iter().zip(support) {
        x = &x + &vertices[i].scale(coef);
    }
    Some(x)
}

/// Flats of the weights found from independent subsets of size at most the rank.
/// Each flat is the sorted list of vertex indices it contains; vertex 0 is the origin.
fn independent_flats(vertices: &[RationalVector]) -> Vec<Vec<usize>> {
    let rank = vertices[0].len();
    let nonzero: Vec<usize> = (0..vertices.len()).filter(|&i| !vertices[i].is_zero()).collect();
    let mut flats: BTreeSet<Vec<usize>> = BTreeSet::new();
    flats.insert((0..vertices.len()).filter(|&i| vertices[i].is_zero()).collect());
    for size in 1..=rank.min(nonzero.len()) {
        for subset in nonzero.iter().copied().combinations(size) {
            let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| vertices[i].coords().to_vec()).collect();
            if linalg::rank(&rows) < size {
                continue;
            }
            let members = (0..vertices.len())
                .filter(|&j| {
                    let mut extended = rows.clone();
                    extended.push(vertices[j].coords().to_vec());
                    linalg::rank(&extended) == size
                })
                .collect();
            flats.insert(members);
        }
    }
    flats.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Weight labels of the flat (`0` is the origin, `i + 1` the `i`-th stratifying weight).
    pub labels: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub epsilon_values: Vec<Rational>,
    pub flats_checked: usize,
    pub symbolic_strata: Vec<RationalVector>,
    /// Dominant directions found by the oracle at each `ε`.
    pub oracle_strata: Vec<Vec<RationalVector>>,
    pub symbolic_semistable: bool,
    pub oracle_semistable: bool,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.agrees() {
            format!(
                "all subsets agree at {} epsilon values ({} flats, {} strata)",
                self.epsilon_values.len(),
                self.flats_checked,
                self.symbolic_strata.len()
            )
        } else {
            format!("{} mismatches", self.mismatches.len())
        }
    }
}

fn distinct_vertices(
    ws: &WeightSystem,
    group: &GroupData,
) -> (Vec<RationalVector>, Vec<Vec<usize>>) {
    let mut vertices = vec![RationalVector::zeros(group.rank())];
    let mut labels = vec![vec![0]];
    for (i, w) in ws.stratify_weights().iter().enumerate() {
        let w = group.reduce(w);
        match vertices.iter().position(|u| *u == w) {
            Some(k) => labels[k].push(i + 1),
            None => {
                vertices.push(w);
                labels.push(vec![i + 1]);
            }
        }
    }
    (vertices, labels)
}

fn oriented(x: &RationalVector, orientation: Orientation) -> Vec<RationalVector> {
    // x = ε·v with ε < 0, so x itself points along −v.
    let signs: &[i64] = match orientation {
        Orientation::Negative => &[1],
        Orientation::Positive => &[-1],
        Orientation::Both => &[1, -1],
    };
    signs
        .iter()
        .map(|&s| primitive_rescale(&x.scale(&Rational::from(s))).expect("nonzero"))
        .collect()
}

pub fn cross_check_enumeration(problem: &ExactnessProblem, config: &OracleConfig) -> Result<CrossCheck> {
    config.validate()?;
    let group = &problem.group;
    let kn_config = problem.kn_config();
    let (symbolic, _) = flat_results(&problem.weights, &problem.chi, group, &kn_config)?;
    let result = problem.enumerate()?;
    let (vertices, labels) = distinct_vertices(&problem.weights, group);
    let lambda = group.reduce(&problem.chi.vector);
    let label_set = |flat: &[usize]| -> Vec<usize> {
        flat.iter().flat_map(|&k| labels[k].iter().copied()).sorted().collect()
    };

    let mut mismatches = Vec::new();
    let flats = independent_flats(&vertices);
    let by_labels: BTreeMap<Vec<usize>, &crate::kn::FlatResult> =
        symbolic.iter().map(|f| (f.labels.clone(), f)).collect();
    let oracle_labels: BTreeSet<Vec<usize>> = flats.iter().map(|f| label_set(f)).collect();
    for l in by_labels.keys().filter(|l| !oracle_labels.contains(*l)) {
        mismatches.push(Mismatch { labels: l.clone(), detail: "flat not found by the oracle".into() });
    }
    for l in oracle_labels.iter().filter(|l| !by_labels.contains_key(*l)) {
        mismatches.push(Mismatch { labels: l.clone(), detail: "flat missing from the enumeration".into() });
    }

    // points[f][e] = oracle min-norm point of flat f at ε_e.
    let points: Vec<Vec<RationalVector>> = flats
        .par_iter()
        .map(|flat| {
            config
                .epsilon_values
                .iter()
                .map(|eps| {
                    let shifted: Vec<RationalVector> =
                        flat.iter().map(|&k| &vertices[k] + &lambda.scale(eps)).collect();
                    numeric_min_norm_with_cap(&shifted, group.form(), kn_config.subset_cap)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    for (flat, pts) in flats.iter().zip(&points) {
        let key = label_set(flat);
        let Some(sym) = by_labels.get(&key) else { continue };
        for (eps, p) in config.epsilon_values.iter().zip(pts) {
            let expected = sym.point.eval(eps);
            if expected != *p {
                mismatches.push(Mismatch {
                    labels: key.clone(),
                    detail: format!("at ε = {eps}: symbolic {expected}, oracle {p}"),
                });
            }
        }
    }

    let (e0, e1) = (&config.epsilon_values[0], &config.epsilon_values[1]);
    let mut oracle_semistable = false;
    let mut oracle_strata: Vec<BTreeSet<RationalVector>> = vec![BTreeSet::new(); config.epsilon_values.len()];
    for pts in &points {
        if pts.iter().all(RationalVector::is_zero) {
            oracle_semistable = true;
            continue;
        }
        // The point vanishes with ε exactly when x(ε₀)/ε₀ = x(ε₁)/ε₁.
        if pts[0].scale(e1) != pts[1].scale(e0) {
            continue;
        }
        for (e, p) in pts.iter().enumerate() {
            for beta in oriented(p, problem.orientation) {
                oracle_strata[e].insert(group.weyl_canonicalize(&beta));
            }
        }
    }
    let oracle_strata: Vec<Vec<RationalVector>> = oracle_strata.into_iter().map(|s| s.into_iter().collect()).collect();
    let symbolic_strata = result.dominant_set();
    for (eps, found) in config.epsilon_values.iter().zip(&oracle_strata) {
        if *found != symbolic_strata {
            mismatches.push(Mismatch {
                labels: Vec::new(),
                detail: format!(
                    "at ε = {eps}: oracle strata {} differ from the enumeration {}",
                    found.iter().join(" "),
                    symbolic_strata.iter().join(" ")
                ),
            });
        }
    }
    if oracle_semistable != result.semistable_nonempty {
        mismatches.push(Mismatch {
            labels: Vec::new(),
            detail: format!(
                "semistable locus: oracle says nonempty = {oracle_semistable}, enumeration says {}",
                result.semistable_nonempty
            ),
        });
    }
    Ok(CrossCheck {
        epsilon_values: config.epsilon_values.clone(),
        flats_checked: flats.len(),
        symbolic_strata,
        oracle_strata,
        symbolic_semistable: result.semistable_nonempty,
        oracle_semistable,
        mismatches,
    })
}

fn random_vector(rng: &mut ChaCha8Rng, rank: usize) -> RationalVector {
    RationalVector::new((0..rank).map(|_| Rational::from(rng.gen_range(-3i64..=3))).collect())
}

/// A reproducible torus problem in cotangent mode with entries in `[−3, 3]`.
pub fn random_problem(rank: usize, weight_count: usize, seed: u64) -> Result<ExactnessProblem> {
    if !(1..=4).contains(&rank) || !(1..=8).contains(&weight_count) {
        return Err(KnxError::InvalidParameter(format!(
            "random problems need 1 ≤ rank ≤ 4 and 1 ≤ weights ≤ 8, got {rank} and {weight_count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..weight_count).map(|_| random_vector(&mut rng, rank)).collect();
    let chi = loop {
        let v = random_vector(&mut rng, rank);
        if !v.is_zero() {
            break v;
        }
    };
    let c = random_vector(&mut rng, rank);
    Ok(ExactnessProblem::new(
        GroupData::torus(rank)?,
        WeightSystem::cotangent(weights)?,
        TorusCharacter::new(chi)?,
        LieCharacter::fixed(c),
    ))
}

/// `count` random problems with rank ≤ 3 and at most 6 weights, each from its own derived seed.
pub fn random_samples(count: usize, seed: u64) -> Result<Vec<(u64, ExactnessProblem)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let rank = rng.gen_range(1..=3);
            let weights = rng.gen_range(1..=6);
            let sample_seed: u64 = rng.gen();
            Ok((sample_seed, random_problem(rank, weights, sample_seed)?))
        })
        .collect()
}
