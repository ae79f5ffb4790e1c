//! Command-line front end for the `kconvex` engine.

pub mod commands;
pub mod files;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use report::{Code, CriteriaMode, VerdictDocument};

#[derive(Debug, Parser)]
#[command(name = "kconvex", version, about = "Exact decisions for inequalities over k-convex functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a problem file, or every `*.json` file in a directory.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        criteria: CriteriaMode,
        /// Emit verdict documents as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compare two configurations at order `k`.
    Order {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Report the extremal pattern of a configuration at order `k`.
    Extremal {
        path: PathBuf,
        #[arg(long)]
        k: usize,
        /// Also decide whether the class is a single point.
        #[arg(long)]
        singleton: bool,
    },
    /// Build an increasing path from `b` up to `a` and write it as CSV.
    Path {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Tolerance for the reported drift and margin.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write seeded random problem files.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Runs a parsed command and returns its exit code. Errors are reported on
/// standard error and map to the input-error code.
pub fn run(cli: Cli) -> Code {
    let result = match cli.command {
        Command::Check { path, criteria, json } => commands::check(&path, criteria, json),
        Command::Order { x, y, k } => commands::order(&x, &y, k),
        Command::Extremal { path, k, singleton } => commands::extremal(&path, k, singleton),
        Command::Path { a, b, k, steps, tol, out } => commands::path(&a, &b, k, steps, tol, out.as_deref()),
        Command::Gen { n, k, seed, count, out } => commands::gen(n, k, seed, count, &out),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        Code::InputError
    })
}
