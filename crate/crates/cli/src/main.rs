use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Design-problem metrics and desk-scale synthesis engines.
#[derive(Parser)]
#[command(name = "designcat", version, about)]
struct Cli {
    /// Report format. Circuits default to JSON, everything else to text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decomposability and interdependency index (PI) of a .fs.json problem.
    Metrics { problem: PathBuf },
    /// Innovation and creativity of a design against a knowledge base.
    Novelty {
        knowledge_base: PathBuf,
        design: PathBuf,
        /// Overrides the design's own `feasible` field.
        #[arg(long)]
        feasible: Option<bool>,
    },
    /// Enumerate the designs a grammar derives, breadth first.
    GrammarGenerate {
        grammar: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 1000)]
        max_designs: usize,
        /// Write one Graphviz file per design into this directory.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Rank the cases of a base by similarity to a query problem.
    CbrRetrieve(RetrieveArgs),
    /// Case-based reasoning.
    Cbr {
        #[command(subcommand)]
        command: CbrCommand,
    },
    /// Find a circuit meeting a .req.json truth table.
    Synth {
        requirement: PathBuf,
        /// Only assign gates to this fixed topology.
        #[arg(long)]
        topology: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        max_gates: usize,
        /// Also write the circuit as a function structure.
        #[arg(long)]
        emit_fs: Option<PathBuf>,
    },
    /// Which synthesis methods suit a problem profile.
    Classify {
        profile: PathBuf,
        /// Capability matrix replacing the built-in one.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CbrCommand {
    /// Same as `cbr-retrieve`.
    Retrieve(RetrieveArgs),
}

#[derive(Args)]
struct RetrieveArgs {
    base: PathBuf,
    query: PathBuf,
    #[arg(short, default_value_t = 3)]
    k: usize,
    /// Similarity weights (.simspec.json).
    #[arg(long)]
    simspec: Option<PathBuf>,
    /// Reuse a case and check it against these requirements.
    #[arg(long)]
    requirements: Option<PathBuf>,
    /// Case to reuse instead of the best-ranked one.
    #[arg(long, requires = "requirements")]
    case: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Negative(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(commands::Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
