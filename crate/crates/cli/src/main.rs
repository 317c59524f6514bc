//! `hbspace`: batch analysis of de Branges-Rovnyak spaces.
//!
//! Exit codes: 0 determinate verdict, 2 undetermined, 1 input or numerical
//! error, 3 inconsistent evidence.

mod commands;
mod io;
mod text;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use hbspace::HbError;

#[derive(Parser, Debug)]
#[command(name = "hbspace", version, about = "Numerical analysis of de Branges-Rovnyak spaces H(b)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the outer mate a of b and report its diagnostics.
    Mate {
        #[command(flatten)]
        input: SymbolInput,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
    /// Kernel and monomial norms in H(b), generic solver against closed forms.
    Norms {
        #[command(flatten)]
        input: SymbolInput,
        /// Kernel points as `re,im`; defaults to a log-radial grid on [0, 1).
        #[arg(long = "lambda", value_parser = io::parse_complex, allow_hyphen_values = true)]
        lambdas: Vec<num_complex::Complex64>,
        /// Report `||z^n||_b` for `n = 0..=N`.
        #[arg(long, default_value_t = 16)]
        monomials: usize,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
    /// Whether mu is a Carleson measure for H(b).
    AnalyzeDirect {
        #[command(flatten)]
        input: PairInput,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
    /// Whether mu is a reverse Carleson measure for H(b).
    AnalyzeReverse {
        #[command(flatten)]
        input: PairInput,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
    /// Whether the H(b) and L2(mu) norms are equivalent.
    AnalyzeEquivalence {
        #[command(flatten)]
        input: PairInput,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
    /// Muckenhoupt A2 scan of a boundary weight.
    A2 {
        /// Weight JSON: {"power": {"exponent", "scale", "angle"}}, {"grid": [...]} or {"constant": c}.
        #[arg(long)]
        weight: PathBuf,
        /// Use the exponent 2 alpha for a power weight.
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
    /// Corona scan of inf (|a| + |b|).
    Corona {
        #[command(flatten)]
        input: SymbolInput,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
    /// Catalogued examples with expected outcomes.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Window scan table of a measure, optionally weighted by the pair.
    ScanDump {
        #[arg(long)]
        mu: PathBuf,
        /// Symbol, needed for the `mate` and `complement` weights.
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScanWeight::None)]
        weight: ScanWeight,
        #[arg(long, value_enum, default_value_t = ScanSide::Sup)]
        kind: ScanSide,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand, Debug)]
enum ScenarioAction {
    /// List the catalog and its parameters.
    List {
        #[command(flatten)]
        out: Output,
    },
    /// Build a scenario and check its expectations.
    Run {
        name: String,
        /// Parameter override `name=value`.
        #[arg(long = "param", value_parser = io::parse_param)]
        params: Vec<(String, f64)>,
        #[command(flatten)]
        res: Resolution,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct SymbolInput {
    /// Symbol JSON file.
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args, Debug)]
struct PairInput {
    /// Symbol JSON file.
    #[arg(long)]
    b: PathBuf,
    /// Measure JSON file.
    #[arg(long)]
    mu: PathBuf,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Resolution {
    /// Boundary grid 2^k for outer constructions (8..=18).
    #[arg(long, value_parser = clap::value_parser!(u32).range(8..=18))]
    pub grid_exponent: Option<u32>,
    /// Arc scan depth (4..=20).
    #[arg(long, default_value_t = 14, value_parser = clap::value_parser!(u32).range(4..=20))]
    pub depth: u32,
    /// First truncation degree of series solves.
    #[arg(long, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(16..=(1 << 20)))]
    pub truncation: u64,
    /// Uniform angles per radius in interior grids.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub angles: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanWeight {
    /// mu itself.
    None,
    /// |a|^2 mu.
    Mate,
    /// (1 - |b|^2) mu.
    Complement,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanSide {
    Sup,
    Inf,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Determinate,
    Error,
    Undetermined,
    Inconsistent,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Determinate => 0,
            Status::Error => 1,
            Status::Undetermined => 2,
            Status::Inconsistent => 3,
        }
    }
}

/// A rendered artifact and the status it maps to.
pub struct Artifact {
    pub body: String,
    pub status: Status,
}

fn configure_threads() -> Result<(), HbError> {
    let Ok(v) = std::env::var("HB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| HbError::Config(format!("HB_THREADS = `{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| HbError::Config(format!("thread pool: {e}")))
}

fn dispatch(cmd: Command) -> Result<(Artifact, Output), HbError> {
    Ok(match cmd {
        Command::Mate { input, res, out } => (commands::mate(&input.b, &res, fmt(&out, Format::Json))?, out),
        Command::Norms { input, lambdas, monomials, res, out } => {
            (commands::norms(&input.b, &lambdas, monomials, &res, fmt(&out, Format::Json))?, out)
        }
        Command::AnalyzeDirect { input, res, out } => {
            (commands::analyze(commands::Analysis::Direct, &input.b, &input.mu, &res, fmt(&out, Format::Json))?, out)
        }
        Command::AnalyzeReverse { input, res, out } => {
            (commands::analyze(commands::Analysis::Reverse, &input.b, &input.mu, &res, fmt(&out, Format::Json))?, out)
        }
        Command::AnalyzeEquivalence { input, res, out } => (
            commands::analyze(commands::Analysis::Equivalence, &input.b, &input.mu, &res, fmt(&out, Format::Json))?,
            out,
        ),
        Command::A2 { weight, alpha, res, out } => (commands::a2(&weight, alpha, &res, fmt(&out, Format::Json))?, out),
        Command::Corona { input, res, out } => (commands::corona(&input.b, &res, fmt(&out, Format::Json))?, out),
        Command::Scenario { action: ScenarioAction::List { out } } => {
            (commands::scenario_list(fmt(&out, Format::Json))?, out)
        }
        Command::Scenario { action: ScenarioAction::Run { name, params, res, out } } => {
            (commands::scenario_run(&name, &params, &res, fmt(&out, Format::Json))?, out)
        }
        Command::ScanDump { mu, b, weight, kind, res, out } => {
            (commands::scan_dump(&mu, b.as_deref(), weight, kind, &res, fmt(&out, Format::Csv))?, out)
        }
    })
}

fn fmt(out: &Output, default: Format) -> Format {
    out.format.unwrap_or(default)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Status::Error.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = configure_threads().and_then(|_| dispatch(cli.command)).and_then(|(artifact, out)| {
        io::emit(&artifact.body, out.out.as_deref())?;
        Ok(artifact.status)
    });
    match run {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Error.code())
        }
    }
}
