//! `eow`: runs kernel tabulation, carrier geometry scans, reproducing-sum
//! checks, global and local continuation and carrier probes, writing
//! JSON reports and CSV grids.
//!
//! Exit codes: 0 when every check passes, 1 on any FAIL, 2 on usage,
//! fixture, I/O or evaluation errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use report::Status;

#[derive(Debug, Parser)]
#[command(name = "eow", version, about = "Edge-of-the-wedge continuation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate or tabulate the kernel K_r, or list its poles.
    Kernel(commands::kernel::KernelArgs),
    /// Scan region O or Q for a carrier along a distance ray.
    Geometry(commands::geometry::GeometryArgs),
    /// Check the reproducing identity (and optionally the delta sequences).
    Reproduce(commands::reproduce::ReproduceArgs),
    /// Global continuation of tube data across the real axis.
    GlobalEow(commands::global::GlobalArgs),
    /// Local continuation around a compact carrier, with heat probes.
    LocalEow(commands::local::LocalArgs),
    /// Decay or growth of heat-probe pairings against a functional.
    CarrierProbe(commands::probe::ProbeArgs),
    /// Run a JSON array of command descriptors.
    Batch(commands::batch::BatchArgs),
}

fn dispatch(command: Command) -> anyhow::Result<Status> {
    match command {
        Command::Kernel(a) => commands::kernel::run(&a),
        Command::Geometry(a) => commands::geometry::run(&a),
        Command::Reproduce(a) => commands::reproduce::run(&a),
        Command::GlobalEow(a) => commands::global::run(&a),
        Command::LocalEow(a) => commands::local::run(&a),
        Command::CarrierProbe(a) => commands::probe::run(&a),
        Command::Batch(a) => run_batch(&a),
    }
}

fn run_batch(a: &commands::batch::BatchArgs) -> anyhow::Result<Status> {
    let runs = commands::batch::load(&a.file)?;
    let mut entries = Vec::new();
    for (index, argv) in runs.into_iter().enumerate() {
        let command = argv[1].clone();
        println!("== run {index}: {}", argv[1..].join(" "));
        let outcome = Cli::try_parse_from(&argv)
            .map_err(anyhow::Error::from)
            .and_then(|cli| dispatch(cli.command));
        let (status, error) = match outcome {
            Ok(s) => (Some(s), None),
            Err(e) => {
                eprintln!("error in run {index}: {e:#}");
                (None, Some(format!("{e:#}")))
            }
        };
        entries.push(commands::batch::BatchEntry {
            index,
            command,
            status,
            error,
        });
    }
    let failed = entries.iter().any(|e| e.status == Some(Status::Fail));
    let errored = entries.iter().filter(|e| e.error.is_some()).count();
    let status = if errored > 0 {
        Status::Fail
    } else {
        Status::from_passed(!failed)
    };
    if let Some(path) = &a.json {
        report::write_json(path, "batch", status, a, &entries)?;
    }
    if errored > 0 {
        anyhow::bail!("{errored} of {} runs failed to execute", entries.len());
    }
    Ok(status)
}

fn exit_code(result: anyhow::Result<Status>) -> ExitCode {
    match result {
        Ok(Status::Fail) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    exit_code(dispatch(cli.command))
}
