use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flagtype_cli::commands::{self, RunOptions, Sl2Options};
use flagtype_cli::{exit, CliError};

/// Iwasawa cocycles on flag manifolds of SL(n, R) and flag-type estimation
/// for matrix semigroups.
///
/// Exit codes: 0 ok, 1 i/o error, 2 parse error, 3 invalid input,
/// 4 some root inconclusive, 5 numerical failure.
#[derive(Parser)]
#[command(name = "flagtype", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Iwasawa factors k, H, n_u of a unit-determinant matrix
    /// given as row-major text.
    Decompose { file: PathBuf },
    /// Estimate the flag type of the semigroup described by a config file.
    #[command(alias = "flagtype")]
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Overrides sampling.samples_per_length.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
    /// Reproduce the SL(2, R) cone example: the lower bound on |g(1,0)|,
    /// the h_t quotients near the boundary ray and the fixer bound.
    Sl2Example {
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 2.0])]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3])]
        delta: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Decompose { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Parse(format!("{}: {e}", file.display())))?;
            print!("{}", commands::decompose(&text)?.text);
            Ok(exit::OK)
        }
        Command::Run {
            config,
            seed,
            out_dir,
            samples,
            quiet,
        } => {
            let outcome = commands::run_flagtype(&RunOptions {
                config,
                seed,
                out_dir,
                samples,
            })?;
            if !quiet {
                print!("{}", outcome.summary());
                println!(
                    "wrote {} and {}",
                    outcome.json.display(),
                    outcome.csv.display()
                );
            }
            Ok(outcome.exit_code)
        }
        Command::Sl2Example {
            t,
            delta,
            samples,
            seed,
            out_dir,
            quiet,
        } => {
            let (ex, csv) = commands::sl2_example(&Sl2Options {
                ts: t,
                deltas: delta,
                samples,
                seed,
                out_dir,
            })?;
            if !quiet {
                print!("{}", ex.table());
                if let Some(p) = csv {
                    println!("wrote {}", p.display());
                }
            }
            if ex.passed() {
                Ok(exit::OK)
            } else {
                eprintln!("error: a lower bound was violated");
                Ok(exit::NUMERIC)
            }
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
