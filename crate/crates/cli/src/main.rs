use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use macfcs_cli::{run, Options, EXIT_INVALID};

/// Evaluate and optimise cooperative transmission strategies for two
/// correlated sources sharing a Gaussian multiple-access channel.
#[derive(Debug, Parser)]
#[command(name = "macfcs", version)]
struct Args {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Overrides `search.rng_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output.path`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Overrides `output.precision` (significant digits).
    #[arg(long)]
    precision: Option<usize>,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options {
        config: args.config,
        seed: args.seed,
        out: args.out,
        precision: args.precision,
    };
    match run(&opts) {
        Ok(outcome) => {
            if !args.quiet {
                println!("{}", outcome.summary);
                println!("wrote {}", outcome.csv_path.display());
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
