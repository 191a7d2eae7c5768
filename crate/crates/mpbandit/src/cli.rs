//! Subcommands and exit codes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use mpbandit_core::bounds::BoundError;
use mpbandit_core::sim::SimError;
use mpbandit_core::policy::PolicyError;

use crate::document::{read_json, DocError, ExperimentDoc, InstanceDoc};
use crate::lemma2::run_lemma2;
use crate::replicate::run_replicated;
use crate::report::{bounds_report, curve_csv, run_summary};

/// Exit code on success.
pub const EXIT_OK: i32 = 0;
/// Exit code when a property check fails.
pub const EXIT_CHECK: i32 = 1;
/// Exit code for invalid input.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit code for runtime failures.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mpbandit", version, about = "Multiple-play bandits with non-equivalent slots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic regret lower bounds of an instance.
    Bounds {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs one policy and writes its regret curve.
    Simulate {
        experiment: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Runs every policy of an experiment, one curve per policy.
    Sweep {
        experiment: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Exhaustive slot-closing check on random reward matrices.
    Lemma2 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<u64>,
    #[arg(long)]
    pub horizon: Option<u64>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Document(#[from] DocError),
    #[error("lemma2: m must be between 1 and 4, got {0}")]
    SlotCount(usize),
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Document(_) | Self::SlotCount(_) => EXIT_VALIDATION,
            Self::Runtime(_) => EXIT_RUNTIME,
            Self::Check(_) => EXIT_CHECK,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Policy(PolicyError::ShapeMismatch { .. }) => Self::Runtime(e.to_string()),
            SimError::Policy(p) => Self::Document(DocError::Policy(p)),
            other => Self::Runtime(other.to_string()),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        Self::Runtime(e.to_string())
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Computes and writes `bounds.json`; returns the report text.
pub fn cmd_bounds(instance: &Path, out: Option<&Path>) -> Result<String, CliError> {
    let doc: InstanceDoc = read_json(instance)?;
    let inst = doc.build()?;
    let (_, value) = bounds_report(&inst)?;
    let text = pretty(&value);
    write(&out.unwrap_or(Path::new("out")).join("bounds.json"), &text)?;
    Ok(text)
}

/// Loads an experiment and applies command-line overrides.
pub fn load_experiment(path: &Path, overrides: &Overrides) -> Result<ExperimentDoc, CliError> {
    let mut doc: ExperimentDoc = read_json(path)?;
    if let Some(seed) = overrides.seed {
        doc.run.master_seed = seed;
    }
    if let Some(r) = overrides.replications {
        doc.run.replications = r;
    }
    if let Some(h) = overrides.horizon {
        doc.run.horizon = h;
    }
    Ok(doc)
}

/// Runs the listed policies; returns the written CSV paths.
pub fn run_experiment(
    doc: &ExperimentDoc,
    out: Option<&Path>,
    single: bool,
) -> Result<Vec<PathBuf>, CliError> {
    let instance = doc.instance.build()?;
    let checkpoints = doc.checkpoints()?;
    let policies = doc.policy_docs();
    if policies.is_empty() {
        return Err(DocError::Field {
            field: "policy",
            reason: "missing".into(),
        }
        .into());
    }
    if single && policies.len() != 1 {
        return Err(DocError::Field {
            field: "policies",
            reason: "simulate takes exactly one policy; use sweep for several".into(),
        }
        .into());
    }
    let specs = policies
        .iter()
        .map(|p| p.to_spec())
        .collect::<Result<Vec<_>, _>>()?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| doc.output.as_ref().map(|o| PathBuf::from(&o.dir)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let (bounds, _) = bounds_report(&instance)?;
    let mut written = Vec::new();
    for spec in &specs {
        let rep = run_replicated(
            &instance,
            spec,
            doc.run.horizon,
            &checkpoints,
            doc.run.replications,
            doc.run.master_seed,
        )?;
        let name = spec.name();
        let summary = run_summary(&instance, name, doc.run.master_seed, &rep, &bounds);
        let csv_path = dir.join(format!("{name}.csv"));
        write(&csv_path, &curve_csv(&rep.aggregate))?;
        write(&dir.join(format!("{name}.summary.json")), &pretty(&summary))?;
        println!(
            "{name}: {} -> {}",
            summary["slope_arbitration"]["statement"].as_str().unwrap_or_default(),
            csv_path.display()
        );
        if !rep.bookkeeping_consistent() {
            return Err(CliError::Check(format!("{name}: regret bookkeeping mismatch")));
        }
        written.push(csv_path);
    }
    Ok(written)
}

/// Runs the slot-closing check; fails when any case disagrees.
pub fn cmd_lemma2(m: usize, trials: u64, seed: u64, out: Option<&Path>) -> Result<String, CliError> {
    if m == 0 || m > 4 {
        return Err(CliError::SlotCount(m));
    }
    let report = run_lemma2(m, trials, seed)?;
    let text = pretty(&serde_json::to_value(&report).expect("serializable"));
    if let Some(dir) = out {
        write(&dir.join(format!("lemma2_m{m}.json")), &text)?;
    }
    if report.failed > 0 {
        return Err(CliError::Check(format!(
            "lemma2: {} of {} checks failed",
            report.failed, report.checks
        )));
    }
    Ok(text)
}

/// Dispatches a parsed command line; returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Bounds { instance, out } => cmd_bounds(&instance, out.as_deref()).map(|t| print!("{t}")),
        Command::Simulate {
            experiment,
            overrides,
        } => load_experiment(&experiment, &overrides)
            .and_then(|doc| run_experiment(&doc, overrides.out.as_deref(), true))
            .map(|_| ()),
        Command::Sweep {
            experiment,
            overrides,
        } => load_experiment(&experiment, &overrides)
            .and_then(|doc| run_experiment(&doc, overrides.out.as_deref(), false))
            .map(|_| ()),
        Command::Lemma2 { m, trials, seed, out } => {
            cmd_lemma2(m, trials, seed, out.as_deref()).map(|t| print!("{t}"))
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
