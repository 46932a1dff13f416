//! Verdicts for a fixed character `c`, and forbidden loci along a line `c₀ + t·η`.

use serde::{Deserialize, Serialize};

use crate::error::{KnxError, Result};
use crate::group::{GroupData, LieCharacter, TorusCharacter};
use crate::kn::{enumerate_kn, KnConfig, KnResult, KnStratum, Orientation, WeightMode, WeightSystem, DEFAULT_SUBSET_CAP};
use crate::scalar::Rational;
use crate::semigroup::{render_union, simplify_union, NumericalSemigroup, SetDescription, Witness};
use crate::shift::{compute_shift, ShiftData, Strictness};
use crate::vector::RationalVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessProblem {
    pub group: GroupData,
    pub weights: WeightSystem,
    pub chi: TorusCharacter,
    pub c: LieCharacter,
    pub orientation: Orientation,
    /// Strata to skip, by any representative of their Weyl orbit.
    pub dropped_strata: Vec<RationalVector>,
    pub strictness: Strictness,
    pub subset_cap: usize,
    /// Free-form remarks carried into reports.
    pub notes: Vec<String>,
}

impl ExactnessProblem {
    pub fn new(group: GroupData, weights: WeightSystem, chi: TorusCharacter, c: LieCharacter) -> Self {
        ExactnessProblem {
            group,
            weights,
            chi,
            c,
            orientation: Orientation::Negative,
            dropped_strata: Vec::new(),
            strictness: Strictness::Slice,
            subset_cap: DEFAULT_SUBSET_CAP,
            notes: Vec::new(),
        }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_strictness(mut self, strictness: Strictness) -> Self {
        self.strictness = strictness;
        self
    }

    pub fn with_dropped(mut self, dropped: Vec<RationalVector>) -> Self {
        self.dropped_strata = dropped;
        self
    }

    pub fn with_c(mut self, c: LieCharacter) -> Self {
        self.c = c;
        self
    }

    pub fn kn_config(&self) -> KnConfig {
        KnConfig {
            subset_cap: self.subset_cap,
            orientation: self.orientation,
        }
    }

    pub fn enumerate(&self) -> Result<KnResult> {
        enumerate_kn(&self.weights, &self.chi, &self.group, &self.kn_config())
    }

    fn validate(&self) -> Result<()> {
        if self.weights.mode() == WeightMode::Raw && !self.group.is_torus() {
            return Err(KnxError::UnsupportedMode(
                "raw weights are only supported for a torus".into(),
            ));
        }
        self.group.validate_lie_character(&self.c)
    }

    /// Enumerated strata minus the dropped ones.
    pub fn kept_strata(&self) -> Result<(KnResult, Vec<KnStratum>)> {
        self.validate()?;
        let result = self.enumerate()?;
        let mut dropped = Vec::new();
        for d in &self.dropped_strata {
            self.group.check_length(d, "dropped stratum")?;
            let dominant = self.group.weyl_canonicalize(d);
            if !result.strata.iter().any(|s| s.beta_dominant == dominant) {
                return Err(KnxError::UnknownDroppedStratum(format!(
                    "{d} matches no enumerated stratum"
                )));
            }
            dropped.push(dominant);
        }
        let kept = result
            .strata
            .iter()
            .filter(|s| !dropped.contains(&s.beta_dominant))
            .cloned()
            .collect();
        Ok((result, kept))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    Certified,
    Violated,
    Parametric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumVerdict {
    pub beta: RationalVector,
    pub beta_dominant: RationalVector,
    pub q_norm: Rational,
    pub shift: ShiftData,
    pub semigroup: NumericalSemigroup,
    /// `shift + I(β)`.
    pub shifted_semigroup: SetDescription,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_of_beta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Parameters `t` at which this stratum fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_locus: Option<SetDescription>,
    /// `η(β) = 0`, so the condition does not depend on `t`.
    #[serde(default)]
    pub constant_condition: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessVerdict {
    pub status: VerdictStatus,
    pub per_stratum: Vec<StratumVerdict>,
    /// Union of the per-stratum loci with redundant members removed.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forbidden_locus: Vec<SetDescription>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden_rendering: Option<String>,
    pub semistable_nonempty: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExactnessVerdict {
    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.per_stratum.iter().filter_map(|s| s.witness.as_ref())
    }

    /// Whether `t` lies in the forbidden locus.
    pub fn forbids(&self, t: &Rational) -> bool {
        self.forbidden_locus.iter().any(|d| d.contains(t))
    }
}

fn base_verdict(problem: &ExactnessProblem, stratum: &KnStratum, beta: &RationalVector) -> Result<StratumVerdict> {
    let shift = compute_shift(beta, &problem.weights, &problem.group, problem.strictness)?;
    if !shift.identity_holds() {
        return Err(KnxError::InternalInconsistency(format!(
            "weight-sum identity fails at {beta}"
        )));
    }
    let semigroup = shift.semigroup()?;
    Ok(StratumVerdict {
        beta: beta.clone(),
        beta_dominant: stratum.beta_dominant.clone(),
        q_norm: stratum.q_norm.clone(),
        shifted_semigroup: semigroup.describe(&shift.shift),
        shift,
        semigroup,
        c_of_beta: None,
        pass: None,
        witness: None,
        t_locus: None,
        constant_condition: false,
    })
}

fn fixed_verdict(problem: &ExactnessProblem, stratum: &KnStratum, beta: &RationalVector) -> Result<StratumVerdict> {
    let mut v = base_verdict(problem, stratum, beta)?;
    let c_of_beta = problem.group.pair(&problem.c.base, beta);
    let witness = v.semigroup.witness(&v.shift.shift, &c_of_beta);
    if let Some(w) = &witness {
        if w.value() != c_of_beta {
            return Err(KnxError::InternalInconsistency(format!(
                "witness {w} does not evaluate to {c_of_beta}"
            )));
        }
    }
    v.pass = Some(witness.is_none());
    v.c_of_beta = Some(c_of_beta);
    v.witness = witness;
    Ok(v)
}

/// Fixed-parameter verdict: `c(β) ∉ shift(β) + I(β)` for every kept stratum.
pub fn check(problem: &ExactnessProblem) -> Result<ExactnessVerdict> {
    if problem.c.direction.is_some() {
        return Err(KnxError::InvalidParameter(
            "check needs a fixed character; a direction calls for the forbidden locus".into(),
        ));
    }
    let (result, kept) = problem.kept_strata()?;
    let per_stratum = kept
        .iter()
        .map(|s| fixed_verdict(problem, s, &s.beta))
        .collect::<Result<Vec<_>>>()?;
    let status = if per_stratum.iter().all(|v| v.pass == Some(true)) {
        VerdictStatus::Certified
    } else {
        VerdictStatus::Violated
    };
    Ok(ExactnessVerdict {
        status,
        per_stratum,
        forbidden_locus: Vec::new(),
        forbidden_rendering: None,
        semistable_nonempty: result.semistable_nonempty,
        notes: problem.notes.clone(),
    })
}

/// Verdict of the fixed character at an arbitrary direction, which need not
/// be primitive or enumerated.
pub fn check_direction(problem: &ExactnessProblem, beta: &RationalVector) -> Result<StratumVerdict> {
    problem.validate()?;
    problem.group.check_length(beta, "direction")?;
    let stratum = KnStratum {
        beta: beta.clone(),
        beta_dominant: problem.group.weyl_canonicalize(beta),
        defining_subset: Vec::new(),
        closest_direction: beta.clone(),
        q_norm: problem.group.form().norm2(beta),
        split: Default::default(),
        z_indices: Vec::new(),
        y_indices: Vec::new(),
    };
    fixed_verdict(problem, &stratum, beta)
}

/// Parametric verdict: the set of `t` with `c₀(β) + t·η(β) ∈ shift(β) + I(β)` for some kept stratum.
pub fn forbidden(problem: &ExactnessProblem) -> Result<ExactnessVerdict> {
    let direction = problem
        .c
        .direction
        .as_ref()
        .ok_or_else(|| KnxError::MissingParameter("c.direction is required for the forbidden locus".into()))?;
    let (result, kept) = problem.kept_strata()?;
    let per_stratum = kept
        .iter()
        .map(|s| {
            let mut v = base_verdict(problem, s, &s.beta)?;
            let a = problem.group.pair(&problem.c.base, &s.beta);
            let b = problem.group.pair(direction, &s.beta);
            v.constant_condition = b.is_zero();
            v.t_locus = Some(v.shifted_semigroup.affine_preimage(&a, &b));
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let loci: Vec<SetDescription> = per_stratum.iter().filter_map(|v| v.t_locus.clone()).collect();
    let forbidden_locus = simplify_union(&loci);
    Ok(ExactnessVerdict {
        status: VerdictStatus::Parametric,
        forbidden_rendering: Some(render_union(&forbidden_locus)),
        forbidden_locus,
        per_stratum,
        semistable_nonempty: result.semistable_nonempty,
        notes: problem.notes.clone(),
    })
}

/// Weights of `𝔤𝔩_n ⊕ ℂⁿ` under the diagonal torus: `e_i − e_j`, `n` zeros, `e_i`.
pub fn adjoint_plus_vector_weights(n: usize) -> Vec<RationalVector> {
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

/// `GL_n` acting on `𝔤𝔩_n ⊕ ℂⁿ` with the determinant character and `c = t·(1, …, 1)`.
pub fn cherednik_preset(n: usize) -> Result<ExactnessProblem> {
    if n == 0 {
        return Err(KnxError::InvalidParameter("n must be at least 1".into()));
    }
    let group = GroupData::gl(n)?;
    let weights = WeightSystem::cotangent(adjoint_plus_vector_weights(n))?;
    let ones = RationalVector::new(vec![Rational::one(); n]);
    let chi = TorusCharacter::new(ones.clone())?;
    let c = LieCharacter::parametric(RationalVector::zeros(n), ones);
    let mut problem = ExactnessProblem::new(group, weights, chi, c).with_orientation(Orientation::Positive);
    problem.notes = vec![
        "t is the shifted parameter c' = c + 1/2; the locus for c is the locus for t translated by -1/2".into(),
        "under the opposite sign convention for c the locus is negated (compare --orientation negative)".into(),
    ];
    Ok(problem)
}
