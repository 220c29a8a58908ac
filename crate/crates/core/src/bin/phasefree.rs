use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phasefree::cli::{parse_grid, run_point, run_sweep, PointConfig, SweepConfig};
use phasefree::encoding::DEFAULT_EPSILON_TAIL;
use phasefree::states::DEFAULT_EPSILON_TRUNC;
use phasefree::Error;

#[derive(Parser, Debug)]
#[command(
    name = "phasefree",
    version,
    about = "Entanglement retained by phase-reference-free encoding of two-mode squeezed light"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fraction of entanglement lost over an (eta, beta) grid, written as CSV.
    Sweep {
        /// Squeezing values: comma list or start:stop:step.
        #[arg(long, default_value = "0.1:0.5:0.1")]
        etas: String,
        /// Ancilla amplitudes: comma list or start:stop:step.
        #[arg(long, default_value = "1:12:1")]
        betas: String,
        #[arg(long, default_value = "figure1.csv")]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_EPSILON_TAIL)]
        epsilon_tail: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON_TRUNC)]
        epsilon_trunc: f64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Detailed report for a single (eta, beta).
    Point {
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        beta: f64,
        /// Cross-check against the dense brute-force oracle.
        #[arg(long)]
        oracle: bool,
        /// Per-mode photon cutoff for the oracle (at most 12).
        #[arg(long, default_value_t = 10)]
        cutoff: usize,
        #[arg(long, default_value_t = DEFAULT_EPSILON_TAIL)]
        epsilon_tail: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON_TRUNC)]
        epsilon_trunc: f64,
    },
}

fn exit_code(err: &Error) -> ExitCode {
    match err {
        Error::Io { .. } => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> phasefree::Result<()> {
    match cli.command {
        Command::Sweep {
            etas,
            betas,
            csv,
            svg,
            epsilon_tail,
            epsilon_trunc,
            threads,
        } => {
            let config = SweepConfig {
                etas: parse_grid(&etas)?,
                betas: parse_grid(&betas)?,
                epsilon_tail,
                epsilon_trunc,
                output_csv_path: csv,
                output_svg_path: svg,
                threads,
            };
            let reports = run_sweep(&config)?;
            eprintln!(
                "wrote {} rows to {}",
                reports.len(),
                config.output_csv_path.display()
            );
            Ok(())
        }
        Command::Point {
            eta,
            beta,
            oracle,
            cutoff,
            epsilon_tail,
            epsilon_trunc,
        } => {
            let config = PointConfig {
                eta,
                beta,
                epsilon_tail,
                epsilon_trunc,
                oracle,
                cutoff,
            };
            run_point(&config, &mut std::io::stdout().lock())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
