//! Per-stratum shift and the numerical semigroup of slice weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{KnxError, Result};
use crate::group::GroupData;
use crate::kn::{WeightMode, WeightSystem};
use crate::scalar::Rational;
use crate::semigroup::NumericalSemigroup;
use crate::vector::RationalVector;

/// Which weights generate the semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Strictness {
    /// Weights of the symplectic slice `T*W ⊖ T*𝔫⁻`.
    #[default]
    #[serde(rename = "slice")]
    Slice,
    /// All weights of `T*W`.
    #[serde(rename = "full_V")]
    FullV,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftData {
    pub beta: RationalVector,
    /// `½Σ|α_i•β|` over the weights of `W`.
    pub half_abs_sum: Rational,
    /// `wt_{𝔫⁻}(β)`.
    pub n_minus_sum: Rational,
    pub shift: Rational,
    /// `β`-weights of the slice, sorted.
    pub slice_weights: Vec<Rational>,
    pub semigroup_generators: Vec<Rational>,
}

impl ShiftData {
    pub fn semigroup(&self) -> Result<NumericalSemigroup> {
        NumericalSemigroup::from_generators(&self.semigroup_generators)
    }

    fn slice_abs_sum(&self) -> Rational {
        self.slice_weights.iter().map(Rational::abs).sum()
    }

    /// `2Σ|α_i•β| = Σ_slice|w| − 2·wt_{𝔫⁻}(β)`.
    pub fn identity_holds(&self) -> bool {
        let two = Rational::from(2);
        let lhs = &(&two * &two) * &self.half_abs_sum;
        let rhs = &self.slice_abs_sum() - &(&two * &self.n_minus_sum);
        lhs == rhs
    }

    /// `value − ½wt_{𝔫⁻}(β) ∈ ¼Σ_slice|w| + I`, equivalent to `value ∈ shift + I`.
    pub fn equivalent_membership(&self, semigroup: &NumericalSemigroup, value: &Rational) -> bool {
        let half = Rational::new(1, 2);
        let quarter = Rational::new(1, 4);
        semigroup.membership(
            &(&quarter * &self.slice_abs_sum()),
            &(value - &(&half * &self.n_minus_sum)),
        )
    }
}

fn nonzero_abs(values: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = values.iter().filter(|w| !w.is_zero()).map(Rational::abs).collect();
    out.sort();
    out.dedup();
    out
}

/// Removes one copy of `value`, or fails.
fn take(counts: &mut BTreeMap<Rational, usize>, value: &Rational, root: &RationalVector) -> Result<()> {
    match counts.get_mut(value) {
        Some(n) if *n > 0 => {
            *n -= 1;
            Ok(())
        }
        _ => Err(KnxError::SliceSubtractionFailure(format!(
            "weight {value} of the root {root} is missing from T*W"
        ))),
    }
}

pub fn compute_shift(
    beta: &RationalVector,
    ws: &WeightSystem,
    group: &GroupData,
    strictness: Strictness,
) -> Result<ShiftData> {
    group.check_length(beta, "direction")?;
    let pairings: Vec<Rational> = ws.w_weights().iter().map(|a| group.pair(a, beta)).collect();
    let abs_sum: Rational = pairings.iter().map(Rational::abs).sum();

    if ws.mode() == WeightMode::Raw {
        if !group.is_torus() {
            return Err(KnxError::UnsupportedMode(
                "raw weights need a torus: the nilpotent part of a nonabelian group is undefined".into(),
            ));
        }
        // The raw weights already form the full symplectic space.
        let mut slice_weights = pairings.clone();
        slice_weights.sort();
        let half_abs_sum = &abs_sum * &Rational::new(1, 4);
        return Ok(ShiftData {
            beta: beta.clone(),
            shift: half_abs_sum.clone(),
            half_abs_sum,
            n_minus_sum: Rational::zero(),
            semigroup_generators: nonzero_abs(&slice_weights),
            slice_weights,
        });
    }

    let full: Vec<Rational> = pairings.iter().cloned().chain(pairings.iter().map(|p| -p)).collect();
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for w in &full {
        *counts.entry(w.clone()).or_default() += 1;
    }
    let negative = group.negative_roots(beta);
    for (root, w) in &negative {
        take(&mut counts, w, root)?;
        take(&mut counts, &-w, root)?;
    }
    let slice_weights: Vec<Rational> = counts
        .into_iter()
        .flat_map(|(w, n)| std::iter::repeat_n(w, n))
        .collect();
    let n_minus_sum: Rational = negative.iter().map(|(_, w)| w.clone()).sum();
    let half_abs_sum = &abs_sum * &Rational::new(1, 2);
    let semigroup_generators = match strictness {
        Strictness::Slice => nonzero_abs(&slice_weights),
        Strictness::FullV => nonzero_abs(&full),
    };
    Ok(ShiftData {
        beta: beta.clone(),
        shift: &n_minus_sum + &half_abs_sum,
        half_abs_sum,
        n_minus_sum,
        slice_weights,
        semigroup_generators,
    })
}

/// Shift data whose semigroup is generated by caller-supplied normal weights
/// at a fixed point instead of the slice.
pub fn compute_shift_with_normal_weights(
    beta: &RationalVector,
    ws: &WeightSystem,
    group: &GroupData,
    normal_weights: &[RationalVector],
) -> Result<ShiftData> {
    let mut data = compute_shift(beta, ws, group, Strictness::Slice)?;
    for w in normal_weights {
        group.check_length(w, "normal weight")?;
    }
    let pairings: Vec<Rational> = normal_weights.iter().map(|w| group.pair(w, beta)).collect();
    data.semigroup_generators = nonzero_abs(&pairings);
    Ok(data)
}
