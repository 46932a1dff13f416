//! Problem files and reports.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{KnxError, Result};
use crate::exactness::{ExactnessProblem, ExactnessVerdict, VerdictStatus};
use crate::group::{GroupData, GroupKind, LieCharacter, TorusCharacter};
use crate::kn::{KnResult, Orientation, WeightMode, WeightSystem};
use crate::oracle::CrossCheck;
use crate::scalar::Rational;
use crate::semigroup::SetDescription;
use crate::shift::{compute_shift, Strictness};
use crate::vector::RationalVector;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    pub base: RationalVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<RationalVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub knx_version: u32,
    pub group: GroupKind,
    pub weights: Vec<RationalVector>,
    #[serde(default = "default_mode")]
    pub mode: WeightMode,
    pub chi: RationalVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<CharacterSpec>,
    #[serde(default)]
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub drop_strata: Vec<RationalVector>,
    #[serde(default)]
    pub strictness: Strictness,
}

fn default_mode() -> WeightMode {
    WeightMode::Cotangent
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| KnxError::Schema(e.to_string()))?;
        if file.knx_version != SCHEMA_VERSION {
            return Err(KnxError::Schema(format!(
                "unsupported knx_version {} (expected {SCHEMA_VERSION})",
                file.knx_version
            )));
        }
        if file.weights.is_empty() {
            return Err(KnxError::Schema("weights must not be empty".into()));
        }
        Ok(file)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    pub fn has_c(&self) -> bool {
        self.c.is_some()
    }

    /// The problem this file describes; a missing `c` becomes the zero character.
    pub fn to_problem(&self) -> Result<ExactnessProblem> {
        let group = GroupData::preset(&self.group)?;
        let weights = WeightSystem::new(self.weights.clone(), self.mode)?;
        group.check_length(&self.chi, "chi")?;
        let chi = TorusCharacter::new(self.chi.clone())?;
        let c = match &self.c {
            Some(spec) => match &spec.direction {
                Some(d) => LieCharacter::parametric(spec.base.clone(), d.clone()),
                None => LieCharacter::fixed(spec.base.clone()),
            },
            None => LieCharacter::fixed(RationalVector::zeros(group.rank())),
        };
        Ok(ExactnessProblem::new(group, weights, chi, c)
            .with_orientation(self.orientation)
            .with_strictness(self.strictness)
            .with_dropped(self.drop_strata.clone()))
    }

    pub fn from_problem(problem: &ExactnessProblem, kind: GroupKind) -> Self {
        ProblemFile {
            knx_version: SCHEMA_VERSION,
            group: kind,
            weights: problem.weights.w_weights().to_vec(),
            mode: problem.weights.mode(),
            chi: problem.chi.vector.clone(),
            c: Some(CharacterSpec {
                base: problem.c.base.clone(),
                direction: problem.c.direction.clone(),
            }),
            orientation: problem.orientation,
            drop_strata: problem.dropped_strata.clone(),
            strictness: problem.strictness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Strata,
    Check,
    Forbidden,
    Oracle,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Strata => "strata",
            CommandKind::Check => "check",
            CommandKind::Forbidden => "forbidden",
            CommandKind::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub group: String,
    pub mode: WeightMode,
    pub orientation: Orientation,
    pub strictness: Strictness,
    pub dropped_strata: Vec<RationalVector>,
    pub subset_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRow {
    pub beta: RationalVector,
    pub beta_dominant: RationalVector,
    pub q_norm: Rational,
    pub defining_subset: Vec<usize>,
    pub v_plus: usize,
    pub v_zero: usize,
    pub v_minus: usize,
    pub y_indices: Vec<usize>,
    pub z_indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifted_semigroup: Option<SetDescription>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCheck {
    pub seed: u64,
    pub rank: usize,
    pub weight_count: usize,
    pub check: CrossCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSection {
    pub problem: CrossCheck,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleCheck>,
}

impl OracleSection {
    pub fn agrees(&self) -> bool {
        self.problem.agrees() && self.samples.iter().all(|s| s.check.agrees())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandKind,
    pub provenance: Provenance,
    pub semistable_nonempty: bool,
    pub strata: Vec<StratumRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<ExactnessVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    /// Strata table with shift data where it is defined.
    pub fn new(command: CommandKind, problem: &ExactnessProblem, result: &KnResult) -> Result<Self> {
        let with_shift = problem.weights.mode() == WeightMode::Cotangent || problem.group.is_torus();
        let strata = result
            .strata
            .iter()
            .map(|s| {
                let mut row = StratumRow {
                    beta: s.beta.clone(),
                    beta_dominant: s.beta_dominant.clone(),
                    q_norm: s.q_norm.clone(),
                    defining_subset: s.defining_subset.clone(),
                    v_plus: s.split.plus.len(),
                    v_zero: s.split.zero.len(),
                    v_minus: s.split.minus.len(),
                    y_indices: s.y_indices.clone(),
                    z_indices: s.z_indices.clone(),
                    shift: None,
                    generators: Vec::new(),
                    shifted_semigroup: None,
                };
                if with_shift {
                    let data = compute_shift(&s.beta, &problem.weights, &problem.group, problem.strictness)?;
                    row.shifted_semigroup = Some(data.semigroup()?.describe(&data.shift));
                    row.generators = data.semigroup_generators;
                    row.shift = Some(data.shift);
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Report {
            command,
            provenance: Provenance {
                group: problem.group.label().to_string(),
                mode: problem.weights.mode(),
                orientation: problem.orientation,
                strictness: problem.strictness,
                dropped_strata: problem.dropped_strata.clone(),
                subset_cap: problem.subset_cap,
            },
            semistable_nonempty: result.semistable_nonempty,
            strata,
            verdict: None,
            oracle: None,
            notes: problem.notes.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| KnxError::Schema(e.to_string()))
    }

    pub fn render_text(&self) -> String {
        self.to_string()
    }
}

fn list(xs: &[usize]) -> String {
    let items: Vec<String> = xs.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn rationals(xs: &[Rational]) -> String {
    let items: Vec<String> = xs.iter().map(Rational::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn lower<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.provenance;
        let mut out = String::new();
        writeln!(out, "knx {} on {}", self.command, p.group)?;
        let dropped = if p.dropped_strata.is_empty() {
            "none".to_string()
        } else {
            p.dropped_strata.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
        };
        writeln!(
            out,
            "mode {}, orientation {}, strictness {}, dropped {dropped}",
            lower(&p.mode),
            lower(&p.orientation),
            lower(&p.strictness)
        )?;
        writeln!(
            out,
            "semistable locus: {}",
            if self.semistable_nonempty { "nonempty" } else { "empty" }
        )?;
        writeln!(out, "{} strata", self.strata.len())?;
        for (i, s) in self.strata.iter().enumerate() {
            writeln!(out, "[{}] beta {}  dominant {}  q {}", i + 1, s.beta, s.beta_dominant, s.q_norm)?;
            writeln!(
                out,
                "    defining subset {}  V+/V0/V- {}/{}/{}",
                list(&s.defining_subset),
                s.v_plus,
                s.v_zero,
                s.v_minus
            )?;
            writeln!(out, "    Y {}  Z {}", list(&s.y_indices), list(&s.z_indices))?;
            if let (Some(shift), Some(set)) = (&s.shift, &s.shifted_semigroup) {
                writeln!(
                    out,
                    "    shift {shift}  generators {}  shift + I = {set}",
                    rationals(&s.generators)
                )?;
            }
        }
        if let Some(v) = &self.verdict {
            match v.status {
                VerdictStatus::Certified => writeln!(out, "verdict: certified")?,
                VerdictStatus::Violated => writeln!(out, "verdict: violated")?,
                VerdictStatus::Parametric => {
                    writeln!(out, "forbidden t: {}", v.forbidden_rendering.as_deref().unwrap_or("∅"))?
                }
            }
            for s in &v.per_stratum {
                if let Some(c) = &s.c_of_beta {
                    let status = if s.pass == Some(true) { "pass" } else { "FAIL" };
                    write!(out, "    {} c(beta) = {c}: {status}", s.beta)?;
                    if let Some(w) = &s.witness {
                        write!(out, "  witness {c} = {w}")?;
                    }
                    writeln!(out)?;
                }
                if let Some(locus) = &s.t_locus {
                    let tag = if s.constant_condition { "  (independent of t)" } else { "" };
                    writeln!(out, "    {} forbids t in {locus}{tag}", s.beta)?;
                }
            }
        }
        if let Some(o) = &self.oracle {
            writeln!(out, "oracle: {}", o.problem.summary())?;
            for m in &o.problem.mismatches {
                writeln!(out, "    flat {}: {}", list(&m.labels), m.detail)?;
            }
            if !o.samples.is_empty() {
                let bad: Vec<&SampleCheck> = o.samples.iter().filter(|s| !s.check.agrees()).collect();
                writeln!(out, "random samples: {} checked, {} disagree", o.samples.len(), bad.len())?;
                for s in bad {
                    writeln!(out, "    seed {} (rank {}, {} weights): {}", s.seed, s.rank, s.weight_count, s.check.summary())?;
                    for m in &s.check.mismatches {
                        writeln!(out, "        flat {}: {}", list(&m.labels), m.detail)?;
                    }
                }
            }
        }
        for n in &self.notes {
            writeln!(out, "note: {n}")?;
        }
        f.write_str(&out)
    }
}
