//! `palg`: parking functions, monotone monomial ideals, their deformations and
//! sandpiles from the command line.
//!
//! Exit codes: 0 success, 2 invalid input or failed precondition, 3 size guard,
//! 4 violated invariant.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parking_algebra::error::{Error, Limits};

use commands::{Action, Context, Mode, ParkingKind, Side};
use input::InputArgs;
use report::{Format, RunManifest};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "palg", version, about = "Parking functions, monotone monomial ideals and sandpiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Truncation degree for Hilbert series; defaults to the socle bound.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Seed for random deformations of families read from a file.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// List trees, parking functions or recurrent configurations.
    #[arg(long, global = true)]
    enumerate: bool,
    /// Lift the size guards on exhaustive enumerations.
    #[arg(long, global = true)]
    guard_override: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spanning-tree count and external activity distribution.
    Trees {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Enumerate G-, ρ-, (k,l)- or almost-parking functions.
    Parking {
        #[arg(value_enum)]
        variant: ParkingKind,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Hilbert series of the monomial quotient A, its deformation B, or both.
    Hilbert {
        #[arg(value_enum)]
        side: Side,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Order complex and Scarf complex resolutions.
    Resolution {
        #[arg(value_enum)]
        mode: Mode,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Toppling matrices: validation, stabilization, recurrence, group, duality.
    Sandpile {
        #[arg(value_enum)]
        action: Action,
        /// Configuration to stabilize, e.g. 3,0,5.
        #[arg(long, value_delimiter = ',')]
        config: Option<Vec<u64>>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Compare A_ρ and B_ρ over all ρ of a given length.
    SearchRho {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_value: u32,
        /// Skip almost-linear ρ.
        #[arg(long)]
        only_nonlinear: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } => 3,
        Error::Invariant(_) => 4,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<Vec<u8>, Error> {
    let limits = if cli.guard_override { Limits::unbounded() } else { Limits::default() };
    if cli.guard_override {
        eprintln!("palg: size guards lifted by --guard-override");
    }
    let ctx = Context { cap: cli.cap, seed: cli.seed, enumerate: cli.enumerate, limits };
    let (name, input) = match &cli.command {
        Command::Trees { input } => ("trees".to_string(), Some(input)),
        Command::Parking { variant, input } => (format!("parking {variant:?}").to_lowercase(), Some(input)),
        Command::Hilbert { side, input } => (format!("hilbert {side:?}").to_lowercase(), Some(input)),
        Command::Resolution { mode, input } => (format!("resolution {mode:?}").to_lowercase(), Some(input)),
        Command::Sandpile { action, input, .. } => (format!("sandpile {action:?}").to_lowercase(), Some(input)),
        Command::SearchRho { n, max_value, only_nonlinear } => {
            (format!("search-rho n={n} max={max_value} only_nonlinear={only_nonlinear}"), None)
        }
    };
    let source = input.map(InputArgs::resolve).transpose()?;
    let report = match (&cli.command, &source) {
        (Command::Trees { .. }, Some(s)) => commands::trees(s, &ctx)?,
        (Command::Parking { variant, .. }, Some(s)) => commands::parking(*variant, s, &ctx)?,
        (Command::Hilbert { side, .. }, Some(s)) => commands::hilbert(*side, s, &ctx)?,
        (Command::Resolution { mode, .. }, Some(s)) => commands::resolution(*mode, s, &ctx)?,
        (Command::Sandpile { action, config, .. }, Some(s)) => {
            commands::sandpile(*action, config.as_deref(), s, &ctx)?
        }
        (Command::SearchRho { n, max_value, only_nonlinear }, None) => {
            commands::rho_search(*n, *max_value, *only_nonlinear, &ctx)?
        }
        _ => unreachable!("inputs are resolved for every command that takes one"),
    };
    let manifest = RunManifest {
        command: name,
        input_digest: source.as_ref().map(input::Source::digest),
        seed: cli.seed,
        cap: cli.cap,
        guards: if cli.guard_override { "override" } else { "default" },
        version: env!("CARGO_PKG_VERSION"),
    };
    report::render(&manifest, &report, cli.format).map_err(|e| Error::Validation(format!("output: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(bytes) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(&bytes).and_then(|()| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("palg: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
