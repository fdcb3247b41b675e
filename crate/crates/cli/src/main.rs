//! `billiard`: simulate billiards in ovals on the plane, sphere and hyperbolic plane.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{Outcome, PerturbArgs};
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "billiard", version, about)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file, `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate the billiard map from one phase point; CSV `i,s,psi,p`.
    Simulate {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        s0: f64,
        #[arg(long)]
        psi0: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Orbits from a grid of initial conditions; CSV `s0,psi0,i,s,psi`.
    Portrait {
        #[arg(long)]
        grid_s: usize,
        #[arg(long)]
        grid_psi: usize,
        #[arg(long)]
        steps: usize,
    },
    /// Search for Birkhoff periodic orbits of rotation type (m, n); JSON.
    FindOrbits {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        seeds: usize,
    },
    /// Check map invariants at random phase points; exits 3 on failure.
    Verify {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Bump the boundary at a vertex of a found orbit and recompute its trace; JSON.
    Perturb {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Position of the orbit in the action-ordered search result.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 16)]
        seeds: usize,
        #[arg(long)]
        width: f64,
        #[arg(long, allow_negative_numbers = true)]
        amplitude: f64,
    },
    /// Length, enclosed area and total curvature of the boundary; JSON.
    Area,
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let cfg = RunConfig::load(path)?;
    match cli.command {
        Command::Simulate { s0, psi0, steps } => commands::simulate(&cfg, s0, psi0, steps),
        Command::Portrait {
            grid_s,
            grid_psi,
            steps,
        } => commands::portrait(&cfg, grid_s, grid_psi, steps),
        Command::FindOrbits { m, n, seeds } => commands::find_orbits(&cfg, m, n, seeds),
        Command::Verify { samples } => commands::verify(&cfg, samples),
        Command::Perturb {
            m,
            n,
            index,
            seeds,
            width,
            amplitude,
        } => commands::perturb(
            &cfg,
            &PerturbArgs {
                m,
                n,
                index,
                seeds,
                width,
                amplitude,
            },
        ),
        Command::Area => commands::area(&cfg),
    }
}

fn emit(target: &str, text: &str) -> std::io::Result<()> {
    if target == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()
    } else {
        std::fs::write(target, text)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // bad arguments are configuration errors; --help and --version are not errors
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|outcome| {
        emit(&cli.out, &outcome.text)?;
        match outcome.failure {
            Some(what) => Err(CliError::Invariant(what)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("billiard: {e}");
            e.exit_code()
        }
    }
}
