use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dprr_core::analysis::ScalingAxis;
use dprr_core::mechanisms::{BudgetMode, DEFAULT_ALPHA};
use dprr_core::pipeline::{
    self, BenchOptions, Command, ExportOptions, GateOptions, GenerateOptions, GraphModel,
    InputFormat, InputSpec, ObfuscateOptions, RunManifest, StatsOptions,
};
use dprr_core::{Error, Exec, Mechanism, Symmetrize};

const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_GATE: u8 = 4;

#[derive(Parser)]
#[command(name = "dprr", version, about = "Degree-preserving randomized response for graphs")]
struct Cli {
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate random graphs as edge lists.
    Generate(GenerateArgs),
    /// Run a mechanism over every graph of a collection.
    Obfuscate(ObfuscateArgs),
    /// Per-user noisy-degree statistics over repeated runs.
    Stats(StatsArgs),
    /// Obfuscation time and output size against graph size.
    Bench(BenchArgs),
    /// Write an obfuscate run back out as a TUDataset collection.
    Export(ExportArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ba,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tudataset,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum MechanismArg {
    Dprr,
    Rr,
    Locallap,
    NonprivPart,
    NonprivFull,
}

impl From<MechanismArg> for Mechanism {
    fn from(m: MechanismArg) -> Self {
        match m {
            MechanismArg::Dprr => Mechanism::Dprr,
            MechanismArg::Rr => Mechanism::Rr,
            MechanismArg::Locallap => Mechanism::LocalLap,
            MechanismArg::NonprivPart => Mechanism::NonprivPart,
            MechanismArg::NonprivFull => Mechanism::NonprivFull,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetrizeArg {
    None,
    Union,
    Intersection,
}

impl From<SymmetrizeArg> for Symmetrize {
    fn from(s: SymmetrizeArg) -> Self {
        match s {
            SymmetrizeArg::None => Symmetrize::None,
            SymmetrizeArg::Union => Symmetrize::Union,
            SymmetrizeArg::Intersection => Symmetrize::Intersection,
        }
    }
}

#[derive(Args)]
struct SeedArg {
    /// Random seed.
    #[arg(long, env = "DPRR_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InputArgs {
    /// Input collection: a TUDataset directory, an edge-list file, or a
    /// directory of edge lists.
    #[arg(long = "in")]
    input: PathBuf,
    /// Input format; detected from the path when omitted.
    #[arg(long)]
    format: Option<FormatArg>,
    /// Dataset name (TUDataset file prefix).
    #[arg(long)]
    name: Option<String>,
}

impl InputArgs {
    fn spec(&self) -> InputSpec {
        let format = match self.format {
            Some(FormatArg::Tudataset) => InputFormat::Tudataset,
            Some(FormatArg::Edgelist) => InputFormat::Edgelist,
            None => detect_format(&self.input),
        };
        InputSpec {
            path: self.input.clone(),
            format,
            name: self.name.clone(),
        }
    }
}

fn detect_format(path: &Path) -> InputFormat {
    let is_tu = std::fs::read_dir(path).is_ok_and(|entries| {
        entries
            .flatten()
            .any(|e| e.file_name().to_string_lossy().ends_with("_A.txt"))
    });
    if is_tu {
        InputFormat::Tudataset
    } else {
        InputFormat::Edgelist
    }
}

#[derive(Args)]
struct PrivacyArgs {
    #[arg(long, value_enum)]
    mechanism: MechanismArg,
    /// Per-user edge-LDP budget.
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Share of the DPRR budget spent on randomized response.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Fraction of users publishing their rows unperturbed.
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    /// Node count used for budget allocation; defaults to the collection's
    /// largest graph.
    #[arg(long)]
    n_max: Option<usize>,
    /// Keep the total spend at epsilon by shrinking the RR share when the
    /// degree-noise floor binds.
    #[arg(long)]
    strict_budget: bool,
}

impl PrivacyArgs {
    fn budget_mode(&self) -> BudgetMode {
        if self.strict_budget {
            BudgetMode::Strict
        } else {
            BudgetMode::Nominal
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "ba")]
    model: ModelArg,
    #[arg(long)]
    n: usize,
    /// Edges attached per new node.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ObfuscateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    privacy: PrivacyArgs,
    #[arg(long, value_enum, default_value = "none")]
    symmetrize: SymmetrizeArg,
    /// Store per-user noisy degrees and sampling probabilities.
    #[arg(long)]
    with_users: bool,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    privacy: PrivacyArgs,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Exit with status 4 when the bias or variance gate fails.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated BA node counts, ascending.
    #[arg(long, value_delimiter = ',', conflicts_with = "gamma_list")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Comma-separated subsampling fractions of --in, ascending.
    #[arg(long, value_delimiter = ',', requires = "input")]
    gamma_list: Vec<f64>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<FormatArg>,
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "dprr,rr")]
    mechanisms: Vec<MechanismArg>,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    /// Output directory of an obfuscate run.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "tudataset")]
    format: ExportFormat,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Tudataset,
}

#[derive(Args)]
struct ReplayArgs {
    /// Manifest of a previous run.
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn build(cmd: Cmd) -> Result<Option<Command>, Error> {
    Ok(Some(match cmd {
        Cmd::Generate(a) => {
            let ModelArg::Ba = a.model;
            Command::Generate(GenerateOptions {
                model: GraphModel::Ba,
                n: a.n,
                m: a.m,
                count: a.count,
                seed: a.seed.seed,
                out: a.out,
            })
        }
        Cmd::Obfuscate(a) => Command::Obfuscate(ObfuscateOptions {
            input: a.input.spec(),
            mechanism: a.privacy.mechanism.into(),
            epsilon: a.privacy.epsilon,
            alpha: a.privacy.alpha,
            rho: a.privacy.rho,
            symmetrize: a.symmetrize.into(),
            seed: a.seed.seed,
            n_max: a.privacy.n_max,
            budget_mode: a.privacy.budget_mode(),
            with_users: a.with_users,
            out: a.out,
        }),
        Cmd::Stats(a) => Command::Stats(StatsOptions {
            input: a.input.spec(),
            mechanism: a.privacy.mechanism.into(),
            epsilon: a.privacy.epsilon,
            alpha: a.privacy.alpha,
            rho: a.privacy.rho,
            trials: a.trials,
            seed: a.seed.seed,
            n_max: a.privacy.n_max,
            budget_mode: a.privacy.budget_mode(),
            check: a.check,
            gates: GateOptions::default(),
            out: a.out,
        }),
        Cmd::Bench(a) => {
            let (axis, input) = if a.gamma_list.is_empty() {
                if a.sizes.is_empty() {
                    return Err(Error::InvalidArgument("bench needs --sizes or --gamma-list".into()));
                }
                (ScalingAxis::Ba { m: a.m, sizes: a.sizes }, None)
            } else {
                let input = InputArgs {
                    input: a.input.expect("clap enforces --in"),
                    format: a.format,
                    name: a.name,
                };
                (ScalingAxis::Subsample { gammas: a.gamma_list }, Some(input.spec()))
            };
            Command::Bench(BenchOptions {
                axis,
                input,
                mechanisms: a.mechanisms.into_iter().map(Into::into).collect(),
                epsilon: a.epsilon,
                trials: a.trials,
                seed: a.seed.seed,
                out: a.out,
            })
        }
        Cmd::Export(a) => {
            let ExportFormat::Tudataset = a.format;
            Command::Export(ExportOptions {
                input: a.input,
                name: a.name,
                out: a.out,
            })
        }
        Cmd::Replay(_) => return Ok(None),
    }))
}

fn report(m: &RunManifest) {
    if let Some(s) = &m.budget {
        println!(
            "budget: epsilon_1={} epsilon_2={} effective epsilon={}",
            s.epsilon_1,
            s.epsilon_2,
            s.effective_epsilon()
        );
    } else if let Some(e) = m.effective_epsilon {
        println!("budget: effective epsilon={e}");
    }
    println!("{}: wrote {} files to {}", m.spec.name(), m.outputs.len() + 1, m.spec.out().display());
    if let Some(passed) = m.gates_passed {
        println!("gates: {}", if passed { "passed" } else { "FAILED" });
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };

    let result = match cli.command {
        Cmd::Replay(a) => pipeline::replay(&a.manifest, &a.out),
        cmd => build(cmd).and_then(|spec| pipeline::run(&spec.expect("not a replay"), exec)),
    };
    match result {
        Ok(m) => {
            report(&m);
            if m.gates_passed == Some(false) {
                ExitCode::from(EXIT_GATE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { EXIT_USAGE } else { EXIT_DATA })
        }
    }
}
