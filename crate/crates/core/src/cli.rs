//! Command-line driver: argument parsing, command dispatch and exit codes.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{KnxError, Result};
use crate::exactness::{check, forbidden, VerdictStatus};
use crate::io::{CommandKind, OracleSection, ProblemFile, Report, SampleCheck};
use crate::kn::Orientation;
use crate::oracle::{cross_check_enumeration, random_samples, OracleConfig};
use crate::shift::Strictness;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "knx", version, about = "Exact Kirwan-Ness strata and exactness certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the strata with their shifts and semigroups.
    Strata(Common),
    /// Certify a fixed parameter or exhibit a violating stratum.
    Check(Common),
    /// The forbidden locus along the line of the parameter's direction.
    Forbidden(Common),
    /// Cross-check the enumeration against the brute-force oracle.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Use ε ∈ {−2^-k, −2^-(k+4)}.
        #[arg(long, default_value_t = 20)]
        eps_den: u32,
        /// Additional random torus problems to cross-check.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    pub file: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,
    #[arg(long, value_enum)]
    pub strictness: Option<StrictnessArg>,
    /// Cap on distinct weights, the origin included.
    #[arg(long)]
    pub max_weights: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    Negative,
    Positive,
    Both,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Negative => Orientation::Negative,
            OrientationArg::Positive => Orientation::Positive,
            OrientationArg::Both => Orientation::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrictnessArg {
    Slice,
    #[value(name = "full_V")]
    FullV,
}

impl From<StrictnessArg> for Strictness {
    fn from(s: StrictnessArg) -> Self {
        match s {
            StrictnessArg::Slice => Strictness::Slice,
            StrictnessArg::FullV => Strictness::FullV,
        }
    }
}

pub fn exit_code(err: &KnxError) -> i32 {
    match err {
        KnxError::CapExceeded { .. } | KnxError::InternalInconsistency(_) => EXIT_LIMIT,
        _ => EXIT_INPUT,
    }
}

/// Runs a command, returning the report and its exit code.
pub fn execute(cli: &Cli) -> Result<(Report, i32)> {
    let (kind, common) = match &cli.command {
        Command::Strata(c) => (CommandKind::Strata, c),
        Command::Check(c) => (CommandKind::Check, c),
        Command::Forbidden(c) => (CommandKind::Forbidden, c),
        Command::Oracle { common, .. } => (CommandKind::Oracle, common),
    };
    let text = std::fs::read_to_string(&common.file)
        .map_err(|e| KnxError::Schema(format!("cannot read {}: {e}", common.file.display())))?;
    let file = ProblemFile::parse(&text)?;
    if matches!(kind, CommandKind::Check | CommandKind::Forbidden) && !file.has_c() {
        return Err(KnxError::MissingParameter(format!("`{kind}` needs the \"c\" key")));
    }
    let mut problem = file.to_problem()?;
    if let Some(o) = common.orientation {
        problem.orientation = o.into();
    }
    if let Some(s) = common.strictness {
        problem.strictness = s.into();
    }
    if let Some(cap) = common.max_weights {
        problem.subset_cap = cap;
    }
    let result = problem.enumerate()?;
    let mut report = Report::new(kind, &problem, &result)?;
    let code = match &cli.command {
        Command::Strata(_) => EXIT_OK,
        Command::Check(_) => {
            let verdict = check(&problem)?;
            let code = if verdict.status == VerdictStatus::Certified { EXIT_OK } else { EXIT_VIOLATED };
            report.verdict = Some(verdict);
            code
        }
        Command::Forbidden(_) => {
            report.verdict = Some(forbidden(&problem)?);
            EXIT_OK
        }
        Command::Oracle { eps_den, samples, seed, .. } => {
            let config = OracleConfig {
                sample_count: *samples,
                rng_seed: *seed,
                ..OracleConfig::from_eps_den(*eps_den)
            };
            let main = cross_check_enumeration(&problem, &config)?;
            let samples = random_samples(config.sample_count, config.rng_seed)?
                .into_iter()
                .map(|(seed, p)| {
                    Ok(SampleCheck {
                        seed,
                        rank: p.group.rank(),
                        weight_count: p.weights.w_weights().len(),
                        check: cross_check_enumeration(&p, &config)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let section = OracleSection { problem: main, samples };
            let code = if section.agrees() { EXIT_OK } else { EXIT_VIOLATED };
            report.oracle = Some(section);
            code
        }
    };
    Ok((report, code))
}

/// Writes the report to `out` and diagnostics to `err`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let json = match &cli.command {
        Command::Strata(c) | Command::Check(c) | Command::Forbidden(c) => c.json,
        Command::Oracle { common, .. } => common.json,
    };
    match execute(cli) {
        Ok((report, code)) => {
            let body = if json { report.to_json() + "\n" } else { report.render_text() };
            if out.write_all(body.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "knx: {e}");
            exit_code(&e)
        }
    }
}
