//! `entangle`: evaluate entanglement measures on state files, reproduce the
//! ρ_p family sweep, tabulate hypothesis-testing exponents and run the
//! property self-test.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entangle_core::measures::{Measure, MeasureOptions};

#[derive(Parser)]
#[command(name = "entangle", version, about = "Entanglement measures relative to locally identical PPT states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one measure on a state file.
    Measure {
        state: PathBuf,
        #[arg(long, default_value = "EM")]
        measure: Measure,
        /// Write the closest feasible state here.
        #[arg(long)]
        optimizer: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// E_R and E_M along the family ρ_p, as CSV.
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Finite-n Neyman–Pearson table against the Stein limit, as CSV.
    Hypothesis {
        omega: PathBuf,
        xi: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiplies every suite size.
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[command(flatten)]
        tol: Tolerances,
    },
}

#[derive(Args, Clone, Copy)]
struct Tolerances {
    /// Frank–Wolfe stopping gap, in bits.
    #[arg(long, default_value_t = 1e-5)]
    gap_tol: f64,
    /// Relative SDP feasibility tolerance.
    #[arg(long, default_value_t = 1e-9)]
    feas_tol: f64,
    /// Relative SDP duality-gap tolerance.
    #[arg(long, default_value_t = 1e-8)]
    sdp_gap_tol: f64,
}

impl Tolerances {
    fn options(self) -> MeasureOptions {
        let mut opts = MeasureOptions { fw_gap_tol: self.gap_tol, ..MeasureOptions::default() };
        opts.sdp.feas_tol = self.feas_tol;
        opts.sdp.gap_tol = self.sdp_gap_tol;
        opts
    }

    fn header(self) -> String {
        format!("gap-tol={:e} feas-tol={:e} sdp-gap-tol={:e}", self.gap_tol, self.feas_tol, self.sdp_gap_tol)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Measure { state, measure, optimizer, tol } => {
            commands::measure(&state, measure, optimizer.as_deref(), tol)
        }
        Command::Sweep { p_min, p_max, steps, out, tol } => commands::sweep(p_min, p_max, steps, out.as_deref(), tol),
        Command::Hypothesis { omega, xi, epsilon, n_max, out } => {
            commands::hypothesis(&omega, &xi, epsilon, n_max, out.as_deref())
        }
        Command::Selftest { seed, scale, tol } => commands::selftest(seed, scale, tol),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
