mod commands;
mod config;
mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use probmetric::{TNorm, TriangleKind};

use commands::{CliError, Outcome};
use config::{OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "probmetric", version, about = "Exact computations in probabilistic metric spaces")]
struct Cli {
    /// Tolerance for numerical assertions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    assert_tol: f64,
    /// Width at which Lévy bisection stops.
    #[arg(long, global = true, default_value_t = 1e-12)]
    bisect_tol: f64,
    /// Number of cells in the grid oracle.
    #[arg(long, global = true, default_value_t = 2048)]
    grid: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identity and triangle axioms of a space.
    Validate { space: PathBuf },
    /// Modified Lévy distance between two distributions.
    Levy { a: PathBuf, b: PathBuf },
    /// Combine two distributions with a triangle function and check it against the grid oracle.
    Star {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "sum")]
        kind: TriangleKind,
        #[arg(long, default_value = "min")]
        tnorm: TNorm,
    },
    /// Canonical metric of a space with its lower and upper bounds.
    Report { space: PathBuf },
    /// Iterate a self-map to its fixed point and certify the convergence rate.
    Fixpoint {
        space: PathBuf,
        map: PathBuf,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        x0: String,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
    },
    /// Smallest 1-Lipschitz map above the data on a subset.
    Envelope {
        space: PathBuf,
        data: PathBuf,
        /// Comma-separated labels; defaults to every point.
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Strong neighborhood of a point and its agreement with the Lévy ball.
    Neighborhood {
        space: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        t: f64,
    },
}

fn run(cli: Cli, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Validate { space } => commands::validate(&space),
        Command::Levy { a, b } => commands::levy(&a, &b, cfg),
        Command::Star { a, b, kind, tnorm } => commands::star(&a, &b, kind, tnorm, cfg),
        Command::Report { space } => commands::report(&space, cfg),
        Command::Fixpoint { space, map, q, x0, max_iter } => {
            commands::fixpoint(&space, &map, q, &x0, max_iter, cfg)
        }
        Command::Envelope { space, data, subset, out } => {
            let subset = subset.as_deref().map(commands::parse_subset).transpose()?;
            commands::envelope(&space, &data, subset.as_deref(), &out)
        }
        Command::Neighborhood { space, x, t } => commands::neighborhood(&space, &x, t, cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        assert_tol: cli.assert_tol,
        bisect_tol: cli.bisect_tol,
        oracle_grid: cli.grid,
        output_format: cli.format,
    };
    if let Err(msg) = cfg.validate() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli, &cfg) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.report.render(&cfg).as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
