//! `qreuse` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure or other error, 2 input
//! parse error, 3 invalid circuit, 4 order search timed out without a
//! feasible order, 5 simulation limit exceeded.

mod bench;
mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qreuse::Error;

#[derive(Parser)]
#[command(name = "qreuse", version, about = "Qubit-reuse compiler for measurement-terminated circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit to fewer qubits.
    Compile(commands::CompileArgs),
    /// Check that a compiled circuit samples the original's distribution.
    Verify(commands::VerifyArgs),
    /// Write a circuit from one of the built-in families.
    Generate(commands::GenerateArgs),
    /// Report causal cones and achievable widths without compiling.
    Analyze(commands::AnalyzeArgs),
    /// Print a circuit's exact outcome distribution.
    Simulate(commands::SimulateArgs),
    /// Run width/time benchmarks over a parameter grid and write CSV.
    Bench(bench::BenchArgs),
}

/// Exit status for a failed command.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::Syntax { .. }
            | Error::Semantic { .. }
            | Error::UnsupportedStatement { .. }
            | Error::UnsupportedInput(_),
        ) => 2,
        Some(Error::InvalidCircuit(_)) => 3,
        Some(Error::Timeout) => 4,
        Some(Error::OracleLimit(_)) => 5,
        _ => 1,
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("QREUSE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("QREUSE_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Compile(a) => commands::compile(a),
        Command::Verify(a) => commands::verify(a),
        Command::Generate(a) => commands::generate(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Bench(a) => bench::run(a),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
