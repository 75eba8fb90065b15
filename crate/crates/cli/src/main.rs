//! `lyapcheck`: quadratic Lyapunov checks for equal-neighbor consensus.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid input.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lyapcheck_core::search::SearchConfig;
use serde_json::Value;

use crate::io::CliError;

#[derive(Parser)]
#[command(name = "lyapcheck", version, about = "Quadratic Lyapunov functions for equal-neighbor consensus")]
struct Cli {
    /// Omit the timestamp so reruns give byte-identical output.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Print the JSON report even for commands that print text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the equal-neighbor iteration over a graph sequence.
    Simulate {
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long)]
        x0: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Trajectory CSV with span and variance columns.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Span threshold for declaring consensus.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Check the coefficient bound and bounded intercommunication windows.
    CheckAssumptions {
        #[arg(long)]
        sequence: PathBuf,
        /// Lower bound on nonzero coefficients, as p/q.
        #[arg(long)]
        alpha: String,
        /// Window length.
        #[arg(long = "B", visible_alias = "window")]
        b: usize,
        /// Number of windows to check (default: whole finite sequence, or
        /// one period).
        #[arg(long)]
        windows: Option<usize>,
    },
    /// Exact variance-increase counterexample for n >= 8.
    Counterexample {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Test a quadratic form against a set of update matrices.
    CheckLyapunov {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        against: PathBuf,
    },
    /// Average a form over all relabelings.
    Symmetrize {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        closed_form: bool,
    },
    /// Common positive fixed vector and the weighted Lyapunov matrix.
    ConstructPi {
        #[arg(long)]
        matrices: PathBuf,
    },
    /// Connected graphs and their equal-neighbor matrices, one JSON per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerical search for a common quadratic Lyapunov function.
    Search {
        #[arg(long)]
        matrices: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Sweeps without improvement before giving up.
        #[arg(long, default_value_t = 500)]
        stall: usize,
    },
    /// Decide whether the variance survives every connected graph on n nodes.
    Verdict {
        #[arg(long)]
        n: usize,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LYAPCHECK_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Input(format!("LYAPCHECK_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}

fn timestamp() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let report = match cli.command {
        Command::Simulate { sequence, x0, steps, csv, tol } => {
            commands::simulate_cmd(&sequence, &x0, steps, csv.as_deref(), tol)?
        }
        Command::CheckAssumptions { sequence, alpha, b, windows } => {
            commands::check_assumptions_cmd(&sequence, &alpha, b, windows)?
        }
        Command::Counterexample { n, transcript } => commands::counterexample_cmd(n, transcript.as_deref())?,
        Command::CheckLyapunov { matrix, against } => commands::check_lyapunov_cmd(&matrix, &against)?,
        Command::Symmetrize { matrix, closed_form } => commands::symmetrize_cmd(&matrix, closed_form)?,
        Command::ConstructPi { matrices } => commands::construct_pi_cmd(&matrices)?,
        Command::Enumerate { n, cap, seed } => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let count = commands::enumerate_cmd(n, cap, seed, &mut lock)?;
            eprintln!("{count} graphs");
            return Ok(true);
        }
        Command::Search { matrices, seed, max_iter, tol, stall } => {
            let cfg = SearchConfig { max_iterations: max_iter, residual_tolerance: tol, infeasibility_stall: stall, seed };
            commands::search_cmd(&matrices, cfg)?
        }
        Command::Verdict { n } => commands::verdict_cmd(n)?,
    };
    let mut json = report.json;
    if !cli.reproducible {
        if let Value::Object(obj) = &mut json {
            obj.insert("timestamp".into(), Value::from(timestamp()));
        }
    }
    let rendered = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
    if let Some(path) = &cli.out {
        io::write_text(path, &rendered)?;
    }
    match report.text {
        Some(text) if !cli.json => print!("{text}"),
        _ => print!("{rendered}"),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
