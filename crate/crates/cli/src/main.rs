//! `spreadlab`: command-line front end for the spread workbench.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spreadlab::Error;

#[derive(Parser, Debug)]
#[command(name = "spreadlab", version, about = "Maximum-spread workbench for K_{s,t}-minor-free graphs")]
pub struct Cli {
    /// Emit a JSON envelope {command, params, results, diagnostics, version}.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV: the command's table, or key,value rows of the results.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomised suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Limit overrides, e.g. `minor=16,census=9,psi=10`.
    #[arg(long, global = true)]
    pub caps: Option<String>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Adjacency spectrum and spread of a graph6 graph.
    Spread { graph: String },
    /// Build L ∨ (ℓK_t ∪ mK₁); ℓ defaults to the optimal clique count.
    Construct {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: Option<usize>,
        /// Head graph on s − 1 vertices (graph6); empty by default.
        #[arg(long)]
        head: Option<String>,
    },
    /// Maximise ψ over graphs on s − 1 vertices.
    PsiMax {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Admissibility table, by exhaustive maximisation and by the closed form.
    Admissible {
        #[arg(long)]
        s_max: usize,
        #[arg(long)]
        t_max: usize,
    },
    /// Optimal clique count ℓ₀ and the extremal construction.
    Ell0 {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
    },
    /// Exact spread for every feasible ℓ.
    ScanEll {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        head: Option<String>,
    },
    /// Decide whether G has an H minor.
    Minor { g: String, h: String },
    /// Decide whether G has a K_{s,t} minor, with edge-count filters.
    KstMinor {
        graph: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        /// Constant C in |E| ≤ C·n; heuristic, defaults to 10t.
        #[arg(long)]
        mader: Option<f64>,
    },
    /// Exhaustive maximum-spread search over K_{s,t}-minor-free classes.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Residual of the four-term expansion on the optimal construction.
    Converge {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, num_args = 1.., required = true)]
        n: Vec<usize>,
    },
    /// Walk-moment expansion of the spread of L ∨ R.
    Expand {
        left: String,
        right: String,
        /// Truncation order for the implicit-equation solver.
        #[arg(long, default_value_t = 24)]
        k: usize,
        /// Parameter t for the c₂ decomposition check.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Seeded randomised consistency checks across modules.
    Selfcheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Caps or hypothesis ranges: exit 1.
    Refused(String),
    /// Unparseable input: exit 2.
    Malformed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_malformed_input() {
            CliError::Malformed(e.to_string())
        } else {
            CliError::Refused(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let report = commands::caps(cli.caps.as_deref()).and_then(|caps| commands::run(&cli, &caps));
    match report {
        Ok(report) => {
            let body = if cli.json {
                report.to_json()
            } else if cli.csv {
                report.to_csv()
            } else {
                report.to_text()
            };
            if let Err(e) = output::emit(&body, cli.out.as_deref()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Malformed(msg)) => {
            eprintln!("malformed input: {msg}");
            ExitCode::from(2)
        }
    }
}
