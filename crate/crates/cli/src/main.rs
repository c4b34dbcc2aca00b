//! `mmf`: moment problems, Mellin transforms and structural checks.
//!
//! Exit status: 0 on success, 1 when a mathematical check fails, 2 on
//! input or usage errors.

mod commands;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Outcome, Overrides, SeminormArgs};
use error::CliResult;
use io::Format;

#[derive(Debug, Parser)]
#[command(
    name = "mmf",
    version,
    about = "Finite generalized Stieltjes moment problems, Mellin tools and structural checks"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Gaussian width of the solver ansatz.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Residual tolerance.
    #[arg(long, global = true, env = "MMF_TOL")]
    tol: Option<f64>,
    /// Seed for retry jitter.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest index searched by check-weights.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Report serialization.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a finite moment problem read from JSON.
    Solve { problem: PathBuf },
    /// Check a function's moments against a problem's targets.
    Verify {
        problem: PathBuf,
        /// Builtin name or JSON term list / solve report.
        function: String,
    },
    /// Mellin transform at one or more points.
    Transform {
        function: String,
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        /// Use quadrature even when a closed form exists.
        #[arg(long)]
        numeric: bool,
    },
    /// Mellin convolution values and the product rule for transforms.
    Convolve {
        f: String,
        g: String,
        #[arg(long = "t")]
        t: Vec<f64>,
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Weighted seminorm table of a term function.
    Seminorms {
        function: String,
        #[arg(long = "gamma", default_values_t = [0.0], allow_hyphen_values = true)]
        gamma: Vec<f64>,
        #[arg(long = "n", default_values_t = [0usize])]
        n: Vec<usize>,
        /// Seminorm flavors (default: all registered).
        #[arg(long = "flavor")]
        flavor: Vec<String>,
        /// Also check norm equivalence for gamma1 < gamma < gamma2.
        #[arg(long, num_args = 3, value_names = ["GAMMA1", "GAMMA", "GAMMA2"], allow_hyphen_values = true)]
        equivalence: Option<Vec<f64>>,
    },
    /// Classify an exponent sequence against condition (S).
    CheckS { spec: PathBuf },
    /// Search for (or verify) a witness of the weight interpolation condition.
    CheckWeights {
        family: PathBuf,
        /// Verify this witness instead of searching.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Build the unit-moment regularizer for a list of exponents.
    Regularizer { exponents: PathBuf },
    /// Solve a parameter-indexed family of moment problems.
    ParametricSolve {
        problem: PathBuf,
        /// Targets CSV (rows n, columns lambda) overriding the JSON targets.
        #[arg(long)]
        targets: Option<PathBuf>,
    },
    /// Tabulate a function on a log-spaced grid.
    Sample {
        function: String,
        #[arg(long, default_value_t = 0.1)]
        t_min: f64,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    let o = Overrides {
        sigma: g.sigma,
        tol: g.tol,
        seed: g.seed,
        horizon: g.horizon,
    };
    let json = g.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Solve { problem } => commands::solve(problem, &o, json),
        Command::Verify { problem, function } => commands::verify(problem, function, &o, json),
        Command::Transform { function, z, numeric } => commands::transform(function, z, *numeric, json),
        Command::Convolve { f, g, t, z } => commands::convolve(f, g, t, z, json),
        Command::Seminorms {
            function,
            gamma,
            n,
            flavor,
            equivalence,
        } => commands::seminorms(
            &SeminormArgs {
                function,
                gammas: gamma,
                orders: n,
                flavors: flavor,
                equivalence: equivalence.as_deref(),
            },
            json,
        ),
        Command::CheckS { spec } => commands::check_s(spec, json),
        Command::CheckWeights { family, witness } => {
            commands::check_weights(family, witness.as_ref(), &o, json)
        }
        Command::Regularizer { exponents } => commands::regularizer(exponents, &o, json),
        Command::ParametricSolve { problem, targets } => {
            commands::parametric(problem, targets.as_ref(), &o, json)
        }
        Command::Sample {
            function,
            t_min,
            t_max,
            points,
        } => commands::sample(function, *t_min, *t_max, *points, g.format.unwrap_or(Format::Csv)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let outcome = run(&cli).and_then(|out| {
        io::emit(cli.global.output.as_ref(), &out.body)?;
        Ok(out)
    });
    match outcome {
        Ok(out) => {
            eprintln!("{}", out.summary);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("mmf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
