//! `flowzeta`: validation, orbit tables, zeta, torsion and cover checks on model files.
//!
//! Exit codes: 0 when no check fails, 1 when a check fails, 2 on invalid input.

mod checks;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flowzeta::model::{validate_model, BackendKind, ModelError, ModelFile, SymbolicFlowModel};
use flowzeta::{Exact, Float, Scalar};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use checks::{Outcome, Settings};
use report::{Check, ModelInfo, Options, RunReport, Status, SCHEMA};

#[derive(Parser)]
#[command(name = "flowzeta", version, about = "Twisted zeta functions and torsion of symbolic flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model file.
    Validate(Common),
    /// Enumerate primitive orbits and check against brute force.
    Orbits(Common),
    /// Markov correction, value at zero and the flow zeta.
    Zeta(Common),
    /// Torsion of the flow complex, its closed form and the Fried identity.
    Torsion {
        #[command(flatten)]
        common: Common,
        /// Only the complement of the unstable orbits.
        #[arg(long)]
        punctured: bool,
    },
    /// Class-number checks of the branched double cover.
    Cover(Common),
    /// Every suite that applies to the model.
    CheckAll(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, default_value_t = 12)]
    order: usize,
    #[arg(long, default_value_t = 8)]
    max_cycle_len: usize,
    /// Overrides the backend named in the model file.
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    /// Overrides the tolerance named in the model file.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Suite {
    Validate,
    Orbits,
    Zeta,
    Torsion { punctured: bool },
    Cover,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, suite) = match cli.command {
        Command::Validate(c) => ("validate", c, Suite::Validate),
        Command::Orbits(c) => ("orbits", c, Suite::Orbits),
        Command::Zeta(c) => ("zeta", c, Suite::Zeta),
        Command::Torsion { common, punctured } => ("torsion", common, Suite::Torsion { punctured }),
        Command::Cover(c) => ("cover", c, Suite::Cover),
        Command::CheckAll(c) => ("check-all", c, Suite::All),
    };
    match run(name, &common, suite) {
        Ok(report) => {
            for c in &report.checks {
                println!("{}: {}", c.name, c.status.as_str());
            }
            for s in &report.skipped {
                println!("{}: skipped ({})", s.name, s.reason);
            }
            if let Some(path) = &common.report {
                if let Err(e) = report.write(path, common.format == Format::Csv) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(name: &str, common: &Common, suite: Suite) -> anyhow::Result<RunReport> {
    let bytes = std::fs::read(&common.model).with_context(|| format!("cannot read {}", common.model.display()))?;
    let text = std::str::from_utf8(&bytes).context("model file is not UTF-8")?;
    let mut file = ModelFile::from_json(text).map_err(|e| anyhow::anyhow!("{e}"))?;
    if let Some(b) = common.backend {
        file.backend.kind = match b {
            Backend::Exact => BackendKind::ExactRational,
            Backend::Float => BackendKind::ComplexFloat,
        };
    }
    if let Some(t) = common.tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            bail!("tolerance must be a finite nonnegative number");
        }
        file.backend.tolerance = t;
    }
    let settings = Settings { order: common.order, max_cycle_len: common.max_cycle_len, tolerance: file.backend.tolerance, seed: common.seed };
    let mut out = Outcome::default();
    match file.backend.kind {
        BackendKind::ExactRational => execute::<Exact>(&file, suite, &settings, &mut out)?,
        BackendKind::ComplexFloat => execute::<Float>(&file, suite, &settings, &mut out)?,
    }
    Ok(RunReport {
        schema: SCHEMA,
        command: name.into(),
        model: ModelInfo { name: file.name.clone(), sha256: hex::encode(Sha256::digest(&bytes)) },
        options: Options {
            order: settings.order,
            max_cycle_len: settings.max_cycle_len,
            backend: match file.backend.kind {
                BackendKind::ExactRational => "exact".into(),
                BackendKind::ComplexFloat => "float".into(),
            },
            tolerance: settings.tolerance,
            seed: settings.seed,
        },
        checks: out.checks,
        skipped: out.skipped,
        data: Value::Object(out.data),
        orbit_table: out.orbit_table,
    })
}

/// Builds the model over `S`; semantic problems are a failed check for
/// `validate` and invalid input for every other command.
fn execute<S: Scalar>(file: &ModelFile, suite: Suite, s: &Settings, out: &mut Outcome) -> anyhow::Result<()> {
    let built = file.build::<S>().map(|m| {
        let report = validate_model(&m);
        (m, report)
    });
    let model: SymbolicFlowModel<S> = match built {
        Ok((m, report)) if report.is_valid() => m,
        Ok((_, report)) | Err(ModelError::Semantic(report)) => {
            if suite == Suite::Validate {
                out.checks.push(Check::new("model-valid", Status::Fail, json!({ "issues": report.issues })));
                return Ok(());
            }
            bail!("invalid model:\n{report}");
        }
        Err(e) => bail!("{e}"),
    };
    let all = suite == Suite::All;
    if suite == Suite::Validate || all {
        out.checks.push(Check::new(
            "model-valid",
            Status::Pass,
            json!({ "states": model.num_states(), "edges": model.edges.len(), "dim": model.dim }),
        ));
    }
    if suite == Suite::Orbits || all {
        checks::orbits(&model, s, out);
    }
    if suite == Suite::Zeta || all {
        checks::zeta(&model, s, out)?;
    }
    match suite {
        Suite::Torsion { punctured } => checks::torsion(&model, punctured, s, out)?,
        Suite::All if model.flow_complex.is_some() => checks::torsion(&model, false, s, out)?,
        Suite::All => out.skip("torsion", "the model has no flow_complex cell data"),
        _ => {}
    }
    let branched = model.flow_complex.as_ref().is_some_and(|f| f.branched);
    match suite {
        Suite::Cover => cover(file, out)?,
        Suite::All if branched && S::EXACT => cover(file, out)?,
        Suite::All if branched => out.skip("cover", "class-number checks need the exact backend"),
        Suite::All => out.skip("cover", "the model has no branched cell data"),
        _ => {}
    }
    Ok(())
}

fn cover(file: &ModelFile, out: &mut Outcome) -> anyhow::Result<()> {
    if file.backend.kind != BackendKind::ExactRational {
        bail!("class-number checks need the exact backend");
    }
    let model = file.build::<Exact>().map_err(|e| anyhow::anyhow!("{e}"))?;
    checks::cover(&model, out)
}
