use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use golden_susy::coherent::{Cutoff, Family};
use golden_susy::entangle::CoherentKind;
use golden_susy::fock::SpectrumKind;
use golden_susy::verify::Fault;
use golden_susy_cli::{
    cmd_bloch, cmd_coherent, cmd_concurrence, cmd_spectrum, cmd_verify, parse_coherent_kind, parse_cutoff, parse_kind,
    CmdOutput, OutputFormat, RunConfig, EXIT_CONFIG,
};

#[derive(Parser, Debug)]
#[command(name = "golden-susy", version, about = "Golden-deformed supersymmetric oscillator toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Comma-separated deformation levels.
    #[arg(long = "k", global = true, value_delimiter = ',', default_value = "0,1,2,3,4,5")]
    k: Vec<u32>,
    #[arg(long, global = true, default_value_t = 5)]
    n_max: usize,
    /// Fock cutoff, or `adaptive`.
    #[arg(long, global = true, default_value = "adaptive", value_parser = parse_cutoff)]
    dim: Cutoff,
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar_omega: f64,
    #[arg(long, global = true, env = "GOLDEN_SUSY_TOL", default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value = "csv")]
    format: OutputFormat,
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy levels for each k.
    Spectrum {
        #[arg(long, default_value = "susy", value_parser = parse_kind)]
        kind: SpectrumKind,
    },
    /// Closed-form concurrence of a super-coherent family over a beta grid.
    Concurrence {
        #[arg(long, default_value = "L", value_parser = parse_coherent_kind)]
        family: CoherentKind,
        #[arg(long, default_value_t = 1.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
    /// Run every identity check.
    Verify {
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Super-number state on the Bloch sphere.
    Bloch {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        phi: f64,
    },
    /// Super-coherent families: cutoff, normalizers, residuals.
    Coherent {
        /// Comma-separated families (sep-up, sep-down, L+, L-, B+, B-).
        #[arg(long, value_delimiter = ',', default_value = "sep-up,sep-down,L+,L-,B+,B-")]
        family: Vec<Family>,
        #[arg(long, default_value_t = 1.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.common;
    let cfg = RunConfig {
        k_list: c.k,
        n_max: c.n_max,
        cutoff: c.dim,
        hbar_omega: c.hbar_omega,
        tol: c.tol,
        format: c.format,
        seed: c.seed,
    };
    let result = match cli.command {
        Command::Spectrum { kind } => cmd_spectrum(&cfg, kind),
        Command::Concurrence { family, beta_max, steps } => cmd_concurrence(&cfg, family, beta_max, steps),
        Command::Verify { inject_fault } => cmd_verify(&cfg, inject_fault.then_some(Fault::PerturbedDivisorTable)),
        Command::Bloch { n, theta, phi } => cmd_bloch(&cfg, n, theta, phi),
        Command::Coherent { family, beta_max, steps } => cmd_coherent(&cfg, &family, beta_max, steps),
    };
    match result {
        Ok(CmdOutput { stdout, stderr, code }) => {
            print!("{stdout}");
            if let Some(msg) = stderr {
                eprintln!("{msg}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
