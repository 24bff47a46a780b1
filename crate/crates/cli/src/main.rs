use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pretentious_cli::commands::{self, SeriesName};
use pretentious_cli::{ExperimentConfig, Result};
use pretentious_core::DerivedFunctionKind;

#[derive(Parser)]
#[command(
    name = "pretentious",
    version,
    about = "Multiplicative-function series, prime sums and identity checks"
)]
struct Cli {
    /// Experiment configuration (flat key = value file)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory, overriding output.dir
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads; 0 picks the number of cores
    #[arg(long, global = true, default_value_t = 0, value_name = "K")]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or load) the smallest-prime-factor sieve and cache it
    Sieve,
    /// Partial sums of a derived coefficient stream at each checkpoint
    PartialSums {
        /// F_plain, H_conv, G_conv or F_mu2
        #[arg(default_value = "F_plain")]
        kind: DerivedFunctionKind,
    },
    /// Prime sum S(x) at each checkpoint
    PrimeSum,
    /// Evaluate a series or product over series.s_grid
    Series {
        /// zeta, F_plain, H_conv, G_conv, F_mu2, G_product or U_product
        which: SeriesName,
    },
    /// Run the verification suite
    Verify,
    /// Fit the growth exponent of partial sums
    Exponent {
        #[arg(default_value = "F_plain")]
        kind: DerivedFunctionKind,
        /// Fit the power law x^ALPHA instead of computed sums
        #[arg(long, value_name = "ALPHA")]
        synthetic: Option<f64>,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

/// Returns whether every check passed.
fn run(cli: &Cli) -> Result<bool> {
    let cfg = load_config(cli)?;
    if matches!(cli.command, Command::Verify) {
        cfg.validate_for_verify()?;
    }
    let (text, ok) = match &cli.command {
        Command::Sieve => (commands::cmd_sieve(&cfg)?, true),
        Command::PartialSums { kind } => (
            commands::cmd_partial_sums(&cfg, *kind, &commands::obtain_sieve(&cfg)?)?,
            true,
        ),
        Command::PrimeSum => (
            commands::cmd_prime_sum(&cfg, &commands::obtain_sieve(&cfg)?)?,
            true,
        ),
        Command::Series { which } => (
            commands::cmd_series(&cfg, *which, &commands::obtain_sieve(&cfg)?)?,
            true,
        ),
        Command::Verify => commands::cmd_verify(&cfg, &commands::obtain_sieve(&cfg)?)?,
        Command::Exponent { kind, synthetic } => {
            let sieve = match synthetic {
                Some(_) => None,
                None => Some(commands::obtain_sieve(&cfg)?),
            };
            (
                commands::cmd_exponent(&cfg, *kind, *synthetic, sieve.as_ref())?.0,
                true,
            )
        }
    };
    print!("{text}");
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {} worker threads: {e}", cli.threads);
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
