use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod formats;
mod report;

/// Association schemes: validation, P-polynomial detection, generators and
/// distance-regular graph checks.
#[derive(Parser)]
#[command(name = "schemex", version)]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the scheme axioms. Exit 0 valid, 2 invalid, 1 unreadable.
    Validate {
        path: PathBuf,
        /// Check one pair per relation only (unsound on invalid input).
        #[arg(long)]
        fast: bool,
    },
    /// Decide P-polynomiality. Exit 0 yes, 3 no, 4 precondition failed,
    /// 5 routes disagree or analysis failed.
    Detect {
        path: PathBuf,
        /// Write a JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Matching tolerance [default: $SCHEMEX_TOL or 1e-8].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write a scheme file for a named family.
    Gen {
        /// hamming N Q | johnson V K | cycle N | complete N | disjoint_cliques C S |
        /// cyclotomic13 | petersen | hypercube_reordered PERM...
        family: String,
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Distances, spectrum and excesses of a graph. Exit 0 distance-regular,
    /// 3 not, 4 not regular or disconnected.
    Graph {
        path: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn tolerance(flag: Option<f64>) -> Result<f64, String> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("SCHEMEX_TOL") {
            Ok(v) => v.trim().parse().map_err(|_| format!("SCHEMEX_TOL is not a number: {v:?}"))?,
            Err(_) => 1e-8,
        },
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(format!("tolerance must be positive, got {tol}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(commands::PARSE);
        }
    }
    let code = match &cli.command {
        Command::Validate { path, fast } => commands::validate(path, *fast),
        Command::Detect { path, json, tol } => match tolerance(*tol) {
            Ok(tol) => commands::detect(path, json.as_deref(), tol),
            Err(e) => {
                eprintln!("error: {e}");
                commands::PARSE
            }
        },
        Command::Gen { family, params, output } => commands::gen(family, params, output.as_deref()),
        Command::Graph { path, json } => commands::graph(path, json.as_deref()),
    };
    ExitCode::from(code)
}
