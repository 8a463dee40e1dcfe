use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

mod commands;
mod error;
mod io;
mod report;

use commands::Context;
use error::CliError;

/// Anti-linear s-map calculus: EPR, teleportation, modular objects, Phi-maps.
#[derive(Parser, Debug)]
#[command(name = "smaps", version)]
struct Cli {
    /// Seed for the ChaCha20 generator used by random checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Override the default tolerance of every residual check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Emit a JSON report (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a plain-text table.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Collapse a bipartite state by an affirmative test of phi_a.
    Epr { state: PathBuf, phi_a: PathBuf },
    /// Teleportation map of a chain of link states (psi_ab phi_bc [psi_cd phi_de ...]).
    Teleport {
        #[arg(required = true, num_args = 2..)]
        links: Vec<PathBuf>,
        /// Input state to teleport.
        #[arg(long)]
        phi_a: Option<PathBuf>,
        /// Also check this many seeded random inputs.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Entanglement swapping by a test of psi_cd on phi_bc (x) phi_de.
    Swap { phi_bc: PathBuf, phi_de: PathBuf, psi_cd: PathBuf },
    /// s-map of several pairs regrouped as one bipartite vector.
    Rearrange {
        #[arg(required = true)]
        pairs: Vec<PathBuf>,
    },
    /// j-maps, J, S and Delta of a completely entangled state.
    Modular { state: PathBuf },
    /// Remote Lueders update of Bob's side by a projector on Alice's side.
    Phi { rho: PathBuf, projector: PathBuf },
    /// Inverse-EPR letter channel at a given q, or its optimum.
    #[command(group(ArgGroup::new("mode").required(true).args(["q", "scan"])))]
    Sorkin {
        #[arg(long)]
        q: Option<f64>,
        /// Grid step for the optimum search, in (0, 1e-3].
        #[arg(long)]
        scan: Option<f64>,
    },
    /// Seeded invariant suite over all modules.
    Selftest {
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
}

fn run(cli: &Cli) -> Result<report::RunReport, CliError> {
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {t}")));
        }
    }
    let ctx = Context {
        seed: cli.seed,
        tol: cli.tol,
    };
    match &cli.command {
        Command::Epr { state, phi_a } => commands::epr(&ctx, state, phi_a),
        Command::Teleport { links, phi_a, random } => commands::teleport(&ctx, links, phi_a.as_deref(), *random),
        Command::Swap { phi_bc, phi_de, psi_cd } => commands::swap(&ctx, phi_bc, phi_de, psi_cd),
        Command::Rearrange { pairs } => commands::rearrange(&ctx, pairs),
        Command::Modular { state } => commands::modular(&ctx, state),
        Command::Phi { rho, projector } => commands::phi(&ctx, rho, projector),
        Command::Sorkin { q, scan } => commands::sorkin(&ctx, *q, *scan),
        Command::Selftest { instances } => commands::selftest(&ctx, *instances),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = if cli.table {
                report.to_table()
            } else {
                format!("{}\n", report.to_json())
            };
            // a closed pipe is not an error of the computation
            let _ = std::io::stdout().write_all(text.as_bytes());
            let failures = report.failures();
            if failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in failures {
                    eprintln!("error: {} = {:e} exceeds {:e}", f.name, f.value, f.tol);
                }
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
