//! Library side of the `hamnf` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::ExperimentConfig;
pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "hamnf", version, about = "Birkhoff normal forms and Sobolev stability experiments for Hamiltonian PDEs on Fourier lattices")]
pub struct Cli {
    /// Worker threads (defaults to all cores). Results do not depend on this value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build H = H0 + P from the config. Writes P.jsonl, frequencies.csv (j,omega),
    /// hamiltonian.json and structure_report.json. Exit 3 when structure checks fail.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the Birkhoff iteration. Writes Z/RN/RT/S_r.jsonl, diagnostics.json and omega.json.
    /// Exit 3 when a homological residual exceeds nf.residual_tol.
    Normalform {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scan the sampled frequencies for small divisors. Writes scan.json and
    /// violations.csv (l,k,divisor,threshold).
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte-Carlo resonant fraction. Writes measure.json and measure.csv
    /// (N,gamma,samples,failures,fraction,ci_lo,ci_hi,lemma_bound,within_lemma_bound).
    Measure {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate and measure stability times. Writes trajectory.csv (t,norm_p,H,momentum[,abs_u_j]),
    /// stability.csv (epsilon,outcome,t) and stability.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Drift-scaling exponents. Writes scaling_original.csv and scaling_transformed.csv (R,max_drift)
    /// and scaling.json with fitted slopes.
    Scaling {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        normalform: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Structure, conjugation symmetry and real-slice checks. Writes verify.json. Exit 3 on failure.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        normalform: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("{}", CliError::config("--threads", "must be >= 1"));
            return 2;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", CliError::Runtime(e.to_string()));
            return 1;
        }
    }
    match dispatch(cli.command) {
        Ok(out) if out.passed => 0,
        Ok(out) => {
            eprintln!("{}", CliError::Check(out.summary));
            3
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<commands::Outcome> {
    use commands::*;
    let load = |p: &PathBuf| ExperimentConfig::load(p);
    match cmd {
        Command::Build { config, out } => cmd_build(&load(&config)?, &out),
        Command::Normalform { config, hamiltonian, out } => cmd_normalform(&load(&config)?, &hamiltonian, &out),
        Command::Scan { config, out } => cmd_scan(&load(&config)?, &out),
        Command::Measure { config, out } => cmd_measure(&load(&config)?, &out),
        Command::Simulate { config, hamiltonian, out } => cmd_simulate(&load(&config)?, &hamiltonian, &out),
        Command::Scaling { config, hamiltonian, normalform, out } => cmd_scaling(&load(&config)?, &hamiltonian, normalform.as_deref(), &out),
        Command::Verify { config, hamiltonian, normalform, out } => cmd_verify(&load(&config)?, &hamiltonian, normalform.as_deref(), &out),
    }
}
