use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shapley_scarf::campaign::{CampaignConfig, Theorem};
use shapley_scarf::gsp::DEFAULT_BUDGET;
use ssm::{CliError, GenMode, Output};

#[derive(Parser)]
#[command(
    name = "ssm",
    version,
    about = "Shapley-Scarf markets: TTC with fixed tie-breaking"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run TTC with fixed tie-breaking on a market file.
    Run {
        file: PathBuf,
        /// Tie-break file overriding the market file's profile.
        #[arg(long)]
        tiebreak: Option<PathBuf>,
        /// Also check IR, Pareto efficiency, core and weak core.
        #[arg(long)]
        audit: bool,
    },
    /// Run and check every axiom; exits 1 if any fails.
    Audit {
        file: PathBuf,
        #[arg(long)]
        tiebreak: Option<PathBuf>,
    },
    /// Randomized campaign for one theorem.
    VerifyTheorems {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// Block count of the objective partitions; random when omitted.
        #[arg(long)]
        blocks: Option<usize>,
        /// First seed; sample `k` uses `seed + k`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest manipulating coalition (gsp only).
        #[arg(long)]
        max_coalition: Option<usize>,
        /// Evaluation budget per manipulation search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print a random market file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        blocks: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "oi")]
        mode: GenMode,
    },
    /// Compare priority-based TTC with the seat-endowment market.
    School { file: PathBuf },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn dispatch(cli: Cli) -> Result<Output, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Run {
            file,
            tiebreak,
            audit,
        } => {
            let tb = tiebreak.as_deref().map(read).transpose()?;
            ssm::cmd_run(&read(&file)?, tb.as_deref(), audit, json)
        }
        Command::Audit { file, tiebreak } => {
            let tb = tiebreak.as_deref().map(read).transpose()?;
            ssm::cmd_run(&read(&file)?, tb.as_deref(), true, json)
        }
        Command::VerifyTheorems {
            theorem,
            n,
            seeds,
            blocks,
            seed,
            max_coalition,
            budget,
        } => {
            let config = CampaignConfig {
                theorem,
                n,
                blocks,
                seeds,
                base_seed: seed,
                max_coalition,
                budget,
            };
            ssm::cmd_verify_theorems(&config, json)
        }
        Command::Gen {
            n,
            blocks,
            seed,
            mode,
        } => ssm::cmd_gen(n, blocks, seed, mode),
        Command::School { file } => ssm::cmd_school(&read(&file)?, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                ssm::EXIT_INPUT
            } else {
                ssm::EXIT_OK
            });
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
