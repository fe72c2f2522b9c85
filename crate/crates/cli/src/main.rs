mod commands;
mod stanza;

use tbflab_cli::config;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "tbflab", version, about = "Two-bit bit flipping decoder design toolkit")]
#[command(args_override_self = true)]
struct Cli {
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate inducing sets with k variables.
    Inducing(InducingArgs),
    /// Build trapping set profiles for one algorithm, or a joint profile for several.
    Profile(ProfileArgs),
    /// Score a pool of algorithms and select a parallel collection.
    Select(SelectArgs),
    /// Monte Carlo frame error rate on a BSC.
    Simulate(SimulateArgs),
    /// Decode every error pattern of one weight.
    Sweep(SweepArgs),
    /// Check a rule file, or materialise a rule of a constrained family.
    ValidateRule(ValidateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct EnsembleArgs {
    #[arg(long, default_value_t = 3)]
    pub d_v: usize,
    #[arg(long, default_value_t = 5)]
    pub d_c_max: usize,
    #[arg(long, default_value_t = 8)]
    pub girth: usize,
    /// Drop graphs holding a codeword lighter than this (0: keep all).
    #[arg(long, default_value_t = 0)]
    pub min_distance: usize,
}

#[derive(Args, Debug)]
pub struct InducingArgs {
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    /// Algorithm file; with several algorithms the joint profile is built.
    #[arg(long)]
    pub rule: String,
    /// File of inducing sets (graph blocks).
    #[arg(long, conflicts_with = "k")]
    pub inducing: Option<String>,
    /// Use every inducing set with this many variables.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n_max: usize,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Give up after this many candidate graphs per profile.
    #[arg(long)]
    pub max_candidates: Option<usize>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    /// Keep only members present in this code.
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct SelectArgs {
    /// Algorithm file holding the candidate pool.
    #[arg(long, conflicts_with = "family")]
    pub pool: Option<String>,
    /// Constrained family for an id-range pool, e.g. `monotone,quiet`.
    #[arg(long, requires = "ids")]
    pub family: Option<String>,
    /// Id range `a..b` (half open) within `--family`.
    #[arg(long)]
    pub ids: Option<String>,
    #[arg(long, default_value_t = 30)]
    pub lmax: usize,
    /// Inducing set sizes, comma separated.
    #[arg(long, default_value = "4")]
    pub k: String,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub p: usize,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long)]
    pub max_candidates: Option<usize>,
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// Machine-readable summary.
    #[arg(long)]
    pub json: Option<String>,
    /// Write the selected algorithms as a decoder file.
    #[arg(long)]
    pub decoder_out: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    /// Parity-check file, or `tanner-155` for the built-in (155,64) code.
    #[arg(long)]
    pub code: String,
    /// `alist` or `qc`; guessed from the extension when absent.
    #[arg(long)]
    pub code_format: Option<String>,
    #[arg(long)]
    pub decoder: String,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Crossover probabilities, comma separated.
    #[arg(long)]
    pub alphas: String,
    #[arg(long, default_value_t = 100)]
    pub min_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Send uniform random codewords instead of the all-zero word.
    #[arg(long)]
    pub random_codewords: bool,
    #[arg(long)]
    pub out: Option<String>,
    /// Log of every wrong frame.
    #[arg(long)]
    pub failures: Option<String>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long)]
    pub weight: usize,
    /// Refuse when more patterns than this would be decoded.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u128,
    /// Decode every pattern even for a quasi-cyclic code.
    #[arg(long)]
    pub no_orbits: bool,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Rule or algorithm file.
    #[arg(long, conflicts_with_all = ["family", "id"])]
    pub rule: Option<String>,
    #[arg(long, requires = "id")]
    pub family: Option<String>,
    #[arg(long)]
    pub id: Option<u128>,
    #[arg(long, default_value_t = 3)]
    pub d_v: usize,
    #[arg(long, default_value_t = 30)]
    pub lmax: usize,
    /// Write the (valid) algorithm here.
    #[arg(long)]
    pub out: Option<String>,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = cli.threads {
            if t == 0 {
                return Err(CliError::Config("--threads must be at least 1".into()));
            }
            b = b.num_threads(t);
        }
        b.build().map_err(|e| CliError::Config(e.to_string()))?
    };
    pool.install(|| match cli.command {
        Command::Inducing(a) => commands::inducing(a),
        Command::Profile(a) => commands::profile(a),
        Command::Select(a) => commands::select(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::ValidateRule(a) => commands::validate_rule(a),
    })
}

fn main() -> ExitCode {
    let (mut argv, config) = config::take_config_flag(std::env::args().collect());
    if let Some(path) = config {
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read config {path}: {e}");
                return ExitCode::from(CliError::Io(String::new()).code());
            }
        };
        match config::parse_config(&text) {
            Ok(entries) => {
                // After the subcommand name, before the user's own flags.
                let names = ["inducing", "profile", "select", "simulate", "sweep", "validate-rule"];
                let at = argv.iter().position(|a| names.contains(&a.as_str())).map_or(argv.len(), |p| p + 1);
                argv.splice(at..at, config::config_args(&entries));
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(CliError::Config(String::new()).code());
            }
        }
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
