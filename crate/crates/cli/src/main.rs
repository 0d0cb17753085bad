//! `cinfty`: command-line front end for presented C∞-rings and the checks
//! built on them.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use report::{CliError, RunReport};

#[derive(Parser, Debug)]
#[command(name = "cinfty", version, about = "Finitely presented C-infinity rings and de Rham checks")]
struct Cli {
    /// Seed for sampling and random trials.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Numeric tolerance (command-specific default when omitted).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cofactor degree bound for membership questions.
    #[arg(long = "degree-bound", global = true)]
    degree_bound: Option<u32>,
    /// Print the JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Suppress the table on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize a ring: generators, Gröbner basis, Kähler presentation.
    Ring {
        #[arg(long)]
        ring: PathBuf,
    },
    /// Randomized checks of the de Rham algebra laws.
    Identities {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Whether a one-form is zero in Ω but killed by every tangent field.
    Psi {
        #[arg(long)]
        ring: PathBuf,
        /// One-form literal such as "x1 * dx2".
        #[arg(long)]
        form: String,
    },
    /// Compare ∫_σ dγ with ∫_∂σ γ.
    Stokes {
        #[arg(long)]
        ring: PathBuf,
        /// Comma-separated components in t1..tk.
        #[arg(long)]
        sigma: String,
        /// Form literal of degree k-1.
        #[arg(long)]
        gamma: String,
        /// Simplex dimension; inferred from the largest t index when omitted.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Glue a global function over the opens of a space file and invert its germ.
    Sheaf {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        section: String,
        /// Base point for the germ inversion, comma-separated.
        #[arg(long)]
        point: Option<String>,
    },
    /// Run the acceptance suite.
    Selfcheck {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

pub struct Globals {
    pub seed: u64,
    pub tol: Option<f64>,
    pub degree_bound: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("CINFTY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let g = Globals { seed: cli.seed, tol: cli.tol, degree_bound: cli.degree_bound };
    let start = Instant::now();
    let result: Result<RunReport, CliError> = match &cli.command {
        Command::Ring { ring } => commands::ring(&g, ring),
        Command::Identities { ring, trials } => commands::identities(&g, ring, *trials),
        Command::Psi { ring, form } => commands::psi(&g, ring, form),
        Command::Stokes { ring, sigma, gamma, dim } => commands::stokes(&g, ring, sigma, gamma, *dim),
        Command::Sheaf { space, section, point } => commands::sheaf(&g, space, section, point.as_deref()),
        Command::Selfcheck { only } => commands::selfcheck(&g, only),
    };
    match result {
        Ok(mut report) => {
            report.wall_time_ms = start.elapsed().as_millis();
            if !cli.quiet {
                eprint!("{}", report.table());
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("cinfty: {e}");
            if cli.json {
                let kind = match e {
                    CliError::Input(_) => "input",
                    CliError::Inconsistent(_) => "inconsistent",
                };
                println!("{}", serde_json::json!({ "error": kind, "message": e.to_string() }));
            }
            e.exit_code()
        }
    }
}
