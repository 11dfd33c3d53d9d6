use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quatcramer::commands::{cmd_det, cmd_pinv, cmd_solve, cmd_verify, CommandOptions, EXIT_ERROR};
use quatcramer::io::Backend;

/// Cramer-rule solver for restricted quaternion matrix equations.
#[derive(Parser)]
#[command(name = "quatcramer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Arithmetic backend (defaults to the problem file's choice, else rational).
    #[arg(long, value_enum, global = true)]
    backend: Option<BackendArg>,
    /// Evaluate every alternative formula and route.
    #[arg(long, global = true)]
    verification: bool,
    /// Worker threads for entry evaluation.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    /// Residual tolerance override.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Write JSON output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Omit wall time from reports.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Rational,
    F64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the equation described by a problem file.
    Solve { problem: PathBuf },
    /// Run all routes, the oracle comparison and Penrose checks.
    Verify {
        problem: PathBuf,
        /// Also check an externally supplied solution matrix.
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// (Weighted) Moore-Penrose inverse of a matrix file.
    Pinv {
        matrix: PathBuf,
        /// Row weight M.
        #[arg(long)]
        m: Option<PathBuf>,
        /// Column weight N.
        #[arg(long)]
        n: Option<PathBuf>,
    },
    /// Row, column and double determinants of a square matrix file.
    Det {
        matrix: PathBuf,
        /// Only this row/column index (1-based).
        #[arg(long)]
        index: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR as u8) } else { ExitCode::SUCCESS };
        }
    };
    let c = cli.common;
    let opts = CommandOptions {
        backend: c.backend.map(|b| match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::F64 => Backend::F64,
        }),
        verification: c.verification,
        threads: c.threads,
        tolerance: c.tolerance,
        output: c.output,
        timing: !c.no_timing,
    };
    let code = match &cli.command {
        Command::Solve { problem } => cmd_solve(problem, &opts),
        Command::Verify { problem, candidate } => cmd_verify(problem, candidate.as_deref(), &opts),
        Command::Pinv { matrix, m, n } => cmd_pinv(matrix, m.as_deref(), n.as_deref(), &opts),
        Command::Det { matrix, index } => cmd_det(matrix, *index, &opts),
    };
    ExitCode::from(code as u8)
}
