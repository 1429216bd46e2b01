//! `quadrep`: generate, verify and inspect pseudo-homogeneous quadric maps.

mod commands;
mod document;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::Outcome;

#[derive(Parser, Debug)]
#[command(
    name = "quadrep",
    version,
    about = "Exact polynomial representatives of sphere homotopy classes"
)]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "QUADREP_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a catalog map and write it as a document.
    Generate {
        /// pi_n:N,D | pi_np1:N | pi_np2:N | pi3_s2:D | pi_np3:N
        target: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the claimed pseudo-homogeneity order of a document.
    Verify {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Points for the sampled mode.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Numeric invariants of the map read through the retraction onto the sphere.
    Invariants {
        input: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        /// Sample count; each check has its own default.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Re-read a document and write it back in canonical form.
    Export {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Grid,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Degree,
    Hopf,
    Hemisphere,
    Homotopies,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("quadrep: {e}");
            return ExitCode::from(2);
        }
    }
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let outcome = match cli.command {
        Command::Generate { target, output } => commands::generate(&argv, &target, output.as_deref()),
        Command::Verify {
            input,
            mode,
            samples,
            seed,
        } => commands::verify(&argv, &input, mode, samples, seed),
        Command::Invariants {
            input,
            check,
            samples,
            seed,
        } => commands::invariants(&argv, &input, check, samples, seed),
        Command::Export { input, output } => commands::export(&input, output.as_deref()),
    };
    match outcome {
        Outcome::Done(report) => {
            if let Some(r) = report {
                println!("{r}");
            }
            ExitCode::SUCCESS
        }
        Outcome::Failed(r) => {
            println!("{r}");
            ExitCode::from(3)
        }
        Outcome::Usage(msg) => {
            eprintln!("quadrep: {msg}");
            ExitCode::from(2)
        }
    }
}
