//! Command-line front end: spec files in, verdict reports out.
//!
//! Exit codes: 0 discernible (or ensured), 3 indiscernible (or not ensured),
//! 4 inconclusive, 2 invalid spec or arguments, 1 internal error.

pub mod document;
pub mod render;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use netdiscern::discern::{Method, Settings};
use serde::Serialize;

use document::{Model, SpecDocument};
use report::{Provenance, Source};

pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => EXIT_INVALID,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<netdiscern::Error> for CliError {
    fn from(e: netdiscern::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Atlas,
    Both,
    /// Both up to 200 states, atlas only above.
    Auto,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Atlas => Method::Atlas,
            MethodArg::Both => Method::Both,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Network spec file (JSON).
    pub spec: PathBuf,
    /// Relative tolerance for rank decisions [default: 1e-8].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Simulation horizon [default: 5].
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,
    /// Simulation sample count [default: 201].
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run every applicable check and report the verdict.
    Analyze(Common),
    /// Print a pair of initial states with identical outputs, if one exists.
    Witness(Common),
    /// Compare the outputs of two initial states under both topologies.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// JSON array with the initial state for the original topology.
        #[arg(long)]
        x0: PathBuf,
        /// JSON array with the initial state for the modified topology.
        #[arg(long)]
        x0bar: PathBuf,
    },
    /// Print the chain-based eigenspace table and its agreement with the
    /// direct eigenspaces.
    Atlas(Common),
}

#[derive(Debug, Clone, Parser)]
#[command(name = "netdiscern", version, about = "Can sensors tell that a network's topology changed?")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// What a command prints and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn pick<T: Copy>(flag: Option<T>, spec: Option<T>, default: T) -> (T, Source) {
    match (flag, spec) {
        (Some(v), _) => (v, Source::Flag),
        (None, Some(v)) => (v, Source::Spec),
        (None, None) => (default, Source::Default),
    }
}

pub fn provenance(common: &Common, doc: &SpecDocument) -> Result<Provenance, CliError> {
    let d = Settings::default();
    let (tol, tol_source) = pick(common.tol, doc.tol, d.tol);
    let (t_final, t_final_source) = pick(common.t_final, doc.t_final, d.t_final);
    let (samples, samples_source) = pick(common.samples, doc.samples, d.samples);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Spec(format!("tol must be positive, got {tol}")));
    }
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(CliError::Spec(format!("t_final must be positive, got {t_final}")));
    }
    if samples < 2 {
        return Err(CliError::Spec(format!("samples must be at least 2, got {samples}")));
    }
    Ok(Provenance {
        tol,
        tol_source,
        t_final,
        t_final_source,
        samples,
        samples_source,
        threshold: d.threshold,
    })
}

fn load(common: &Common) -> Result<(Model, Provenance), CliError> {
    let doc = SpecDocument::load(&common.spec)?;
    let prov = provenance(common, &doc)?;
    Ok((doc.to_model()?, prov))
}

fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Spec(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T, format: Format, text: impl FnOnce(&T) -> String) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(text(value)),
        Format::Json => serde_json::to_string_pretty(value)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze(common) => {
            let (model, prov) = load(common)?;
            let r = report::analyze(&model, &prov, common.method.into())?;
            Ok(Outcome {
                stdout: emit(&r, common.format, render::report)?,
                code: r.exit_code(),
            })
        }
        Command::Witness(common) => {
            let (model, prov) = load(common)?;
            let r = report::analyze(&model, &prov, common.method.into())?;
            let w = report::witness(&r);
            Ok(Outcome {
                stdout: emit(&w, common.format, render::witness)?,
                code: w.exit_code(),
            })
        }
        Command::Simulate { common, x0, x0bar } => {
            let (model, prov) = load(common)?;
            let s = report::simulate(&model, &prov, &read_vector(x0)?, &read_vector(x0bar)?)?;
            Ok(Outcome {
                stdout: emit(&s, common.format, render::simulation)?,
                code: s.exit_code(),
            })
        }
        Command::Atlas(common) => {
            let (model, prov) = load(common)?;
            let Model::Network(spec) = &model else {
                return Err(CliError::Spec("atlas needs a spec in network mode".into()));
            };
            let a = report::atlas(spec, &prov)?;
            Ok(Outcome {
                stdout: emit(&a, common.format, render::atlas)?,
                code: a.exit_code(),
            })
        }
    }
}

/// Parse arguments, run, print. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
