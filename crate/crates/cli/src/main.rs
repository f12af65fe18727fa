//! `tetrakit`: classify tetrahedra, evaluate volumes, reconstruct from
//! facet data and run invariant sweeps.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 degenerate input,
//! 3 not realizable, 4 closure violation, 5 degenerate normals,
//! 6 sweep finished with a failing invariant.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tetrakit::GeometryError;

#[derive(Debug, Parser)]
#[command(
    name = "tetrakit",
    version,
    about = "Tetrahedron symmetry, volume and reconstruction toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify as Regular, Isosceles, Reversible or Generic.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Volume from every applicable method with cross-method residuals.
    Volume {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rebuild a tetrahedron from facet normals and areas.
    Reconstruct {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit vertex coordinates for the given input.
    Build {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a seeded invariant sweep.
    Sweep {
        /// theorem2, corollary3, volume-formula, regge, degeneracy, roundtrip or perimeter
        name: String,
        #[arg(short = 'n', long = "samples", default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Evaluate samples on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Four vertices as 12 comma-separated numbers x0,y0,z0,...,x3,y3,z3.
    #[arg(long, allow_hyphen_values = true)]
    vertices: Option<String>,
    /// Six edge lengths e01,e02,e03,e12,e13,e23.
    #[arg(long)]
    edges: Option<String>,
    /// Reversible parameters a,b,c,d (opposite pairs (a,a), (b,b), (c,d)).
    #[arg(long)]
    reversible: Option<String>,
    /// Isosceles opposite-edge lengths a,b,c.
    #[arg(long)]
    isosceles: Option<String>,
    /// JSON file with a `facets` array of {normal, area}.
    #[arg(long)]
    facets: Option<PathBuf>,
    /// JSON file holding one of `vertices`, `edges`, `reversible`, `facets`.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct CommonArgs {
    /// Machine-readable JSON output.
    #[arg(long)]
    json: bool,
    /// Multiplier applied to every default tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol: f64,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn geometry(e: GeometryError) -> Self {
        let code = match e {
            GeometryError::DegenerateTetrahedron { .. } => 2,
            GeometryError::NotRealizable(_) => 3,
            GeometryError::ClosureViolation { .. } => 4,
            GeometryError::DegenerateNormals | GeometryError::SingularMatrix { .. } => 5,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Classify { input, common } => commands::classify(&input, common),
        Command::Volume { input, common } => commands::volume(&input, common),
        Command::Reconstruct { input, common } => commands::reconstruct(&input, common),
        Command::Build { input, common } => commands::build(&input, common),
        Command::Sweep {
            name,
            samples,
            seed,
            sequential,
            common,
        } => commands::sweep(&name, samples, seed, sequential, common),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
