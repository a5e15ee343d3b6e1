#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod failure;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, Overrides, RunConfig};
use failure::{Failure, EXIT_EMPTY, EXIT_SCHEMA};

/// Interior transmission eigenvalue toolkit.
#[derive(Debug, Parser)]
#[command(name = "tevl", version)]
struct Cli {
    /// What to run; must match the `command` field of the config if present.
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Root residual tolerance (ball runs).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Grid step (ball, galerkin and crossing runs).
    #[arg(long = "grid-step")]
    grid_step: Option<f64>,
}

fn emit(f: &Failure) -> ExitCode {
    eprintln!("{}", serde_json::to_string(f).expect("diagnostic serializes"));
    ExitCode::from(f.exit_code)
}

fn threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("TEVL_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::schema(format!("TEVL_THREADS must be a non-negative integer, got {raw:?}"), None))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::io(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help, --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return emit(&Failure::schema(e.render().to_string().trim_end().to_owned(), None));
        }
    };
    if let Err(f) = threads() {
        return emit(&f);
    }
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => return emit(&Failure { exit_code: EXIT_SCHEMA, ..Failure::io(format!("{}: {e}", cli.config.display())) }),
    };
    let overrides = Overrides { tolerance: cli.tolerance, grid_step: cli.grid_step };
    let mut cfg = match RunConfig::parse(&text, Some(cli.command), overrides) {
        Ok(c) => c,
        Err(f) => return emit(&f),
    };
    match run::run(&mut cfg, &cli.out) {
        Ok(summary) => {
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            if f.exit_code == EXIT_EMPTY {
                println!("{}", serde_json::json!({ "command": cli.command.name(), "count": 0 }));
            }
            emit(&f)
        }
    }
}
