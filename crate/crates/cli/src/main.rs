mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "wtl", version, about = "Input-driven pushdown automata with translucent letters")]
pub struct Cli {
    /// Split each word argument into single-character tokens.
    #[arg(long, global = true)]
    pub chars: bool,
    /// Print decision reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Configuration budget for a single membership search.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub max_configurations: usize,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a machine description.
    Validate { file: PathBuf },
    /// Decide membership of a word.
    Run {
        file: PathBuf,
        #[arg(last = true)]
        word: Vec<String>,
    },
    /// Print a computation on a word.
    Trace {
        file: PathBuf,
        #[arg(last = true)]
        word: Vec<String>,
    },
    /// List accepted words up to a length, shortest first.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Emptiness or finiteness of a returning machine.
    Decide { question: Question, file: PathBuf },
    /// Search for a rejected word up to a length.
    Universality {
        file: PathBuf,
        #[arg(long)]
        bound: usize,
    },
    /// Compare two machines on all words up to a length.
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Build a derived machine.
    Construct {
        kind: Construction,
        file: PathBuf,
        file2: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Membership in a reference language.
    Oracle {
        name: String,
        #[arg(last = true)]
        word: Vec<String>,
    },
    /// Parikh vectors of accepted words up to a length.
    Parikh {
        /// A machine file or `oracle:NAME`.
        source: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Built-in example machines.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Computation encodings of a linear bounded automaton.
    Valc {
        #[command(subcommand)]
        action: ValcAction,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Question {
    Emptiness,
    Finiteness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Nonreturning,
    Npda,
    Union,
}

#[derive(Debug, Subcommand)]
pub enum FixturesAction {
    List,
    Emit {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ValcAction {
    /// Write the machine accepting the invalid encodings.
    Build {
        lba: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode the accepting computation on an input.
    Gen {
        lba: PathBuf,
        /// Print a seeded single-token mutation instead.
        #[arg(long)]
        mutate: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(last = true)]
        input: Vec<String>,
    },
    /// Check whether a word encodes an accepting computation.
    Check {
        lba: PathBuf,
        #[arg(last = true)]
        word: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    match commands::execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
