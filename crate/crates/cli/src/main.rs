use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use reconfig_core::statespace::{SearchLimits, DEFAULT_MAX_MOVES, DEFAULT_MAX_STATES};

mod commands;
mod error;
mod model;
mod reduce;

use error::{invalid, Result, EXIT_OK, EXIT_UNREACHABLE};
use model::Problem;

/// Reconfiguration toolkit: search, certificates, reductions and gadget audits.
///
/// Exit codes: 0 success or reachable, 1 unreachable, 2 invalid input,
/// 3 resource cap exceeded, 4 unsupported, 5 gadget audit failure.
#[derive(Debug, Parser)]
#[command(name = "reconfig", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Limits {
    /// Maximum number of configurations to explore.
    #[arg(long, env = "RECONFIG_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Maximum certificate length in moves.
    #[arg(long, default_value_t = DEFAULT_MAX_MOVES)]
    max_moves: usize,
}

impl Limits {
    fn get(&self) -> Result<SearchLimits> {
        SearchLimits::new(self.max_states, self.max_moves).map_err(invalid)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that an instance file is well formed with feasible endpoints.
    Verify { instance: PathBuf },
    /// Decide whether the goal is reachable from the start.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        limits: Limits,
        /// Write a certificate here when the goal is reachable.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
    },
    /// Replay a certificate against an instance.
    CheckCert { instance: PathBuf, certificate: PathBuf },
    /// Exhaustively check every NAE gadget against its NCL node.
    GadgetAudit {
        /// Corrupt one OR gadget clause before auditing.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Graphviz export of an instance, or of its reachable component.
    ExportDot {
        instance: PathBuf,
        /// Export the component of the start configuration instead of the instance.
        #[arg(long)]
        config_graph: bool,
        /// Maximum number of component nodes.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// DIMACS export of a NAE or CNF formula.
    ExportDimacs {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The polytope of a hypercube instance as `Ax <= b`, in JSON.
    ExportAxb {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate an instance into another model; also writes `<output>.map.json`.
    Reduce {
        #[arg(long)]
        from: Problem,
        #[arg(long)]
        to: Problem,
        instance: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Use one rigid gadget for all constant terminals.
        #[arg(long)]
        share_rigid: bool,
        /// Subset-sum value encoding.
        #[arg(long, value_enum)]
        encoding: Option<reduce::Encoding>,
        /// Per-color bit shift for the compact encoding.
        #[arg(long, requires = "encoding")]
        padding: Option<u64>,
    },
    /// Carry a certificate of a reduced instance back to its source.
    ProjectCert {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify { instance } => commands::verify(&instance)?,
        Command::Solve { instance, limits, emit_cert } => {
            if !commands::solve(&instance, limits.get()?, emit_cert.as_deref())? {
                return Ok(EXIT_UNREACHABLE);
            }
        }
        Command::CheckCert { instance, certificate } => commands::check_cert(&instance, &certificate)?,
        Command::GadgetAudit { inject_fault } => commands::gadget_audit_cmd(inject_fault)?,
        Command::ExportDot { instance, config_graph, cap, output } => {
            commands::export_dot(&instance, config_graph, cap, output.as_deref())?
        }
        Command::ExportDimacs { instance, output } => commands::export_dimacs(&instance, output.as_deref())?,
        Command::ExportAxb { instance, output } => commands::export_axb(&instance, output.as_deref())?,
        Command::Reduce { from, to, instance, output, share_rigid, encoding, padding } => {
            let opts = reduce::Options { share_rigid, encoding, padding };
            reduce::reduce(from, to, &instance, &output, opts)?;
        }
        Command::ProjectCert { map, cert, output, limits } => {
            reduce::project_cert(&map, &cert, &output, limits.get()?)?
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
