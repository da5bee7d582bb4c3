use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crat::{
    canonical, outcome_json, parse_json, run_batch, run_value, verify, CliError, CliResult,
    Command, Settings,
};
use serde_json::Value;

/// Certified Chinese remainder approximation over p-adic integers, Z[√2] and
/// polynomial rings on a disk.
#[derive(Parser)]
#[command(name = "crat", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// JSON file to read; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a residue system.
    Crt(Input),
    Interp {
        #[command(subcommand)]
        which: InterpCmd,
    },
    Hyper {
        #[command(subcommand)]
        which: HyperCmd,
    },
    Demo {
        #[command(subcommand)]
        which: DemoCmd,
    },
    /// Decide topological co-maximality of two ideals.
    Tcm(Input),
    /// Re-check a result (or an array of results).
    Verify(Input),
    /// Run a job, or an array of jobs, naming the command in each.
    Run {
        #[command(flatten)]
        input: Input,
        /// Worker threads for job arrays (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum InterpCmd {
    /// Approximate interpolation over Z[√2].
    Lagrange(Input),
    /// Exact interpolation of prescribed jets.
    Hermite(Input),
}

#[derive(Subcommand)]
enum HyperCmd {
    /// Hyperspace gaps between pairs of p-adic ideals.
    Gap(Input),
    /// Gap profile of a descending chain.
    Net(Input),
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Densification iterates or far-pole density certificates.
    Densify(Input),
    /// Lower bounds showing the powers of a disk ideal do not converge.
    Divergence(Input),
}

fn read_input(input: &Input) -> CliResult<Value> {
    let text = match &input.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            s
        }
    };
    parse_json(&text)
}

fn single(input: &Input, command: Command) -> CliResult<Value> {
    let settings = Settings::from_env()?;
    run_value(&read_input(input)?, Some(command), settings)
}

fn batch(input: &Input, threads: usize) -> (Value, i32) {
    let settings = match Settings::from_env() {
        Ok(s) => s,
        Err(e) => return (e.to_json(), e.exit_code()),
    };
    match read_input(input) {
        Ok(Value::Array(jobs)) => {
            let results = run_batch(&jobs, settings, threads);
            let code = results
                .iter()
                .filter_map(|r| r.as_ref().err().map(CliError::exit_code))
                .max()
                .unwrap_or(0);
            (
                Value::Array(results.iter().map(outcome_json).collect()),
                code,
            )
        }
        Ok(job) => {
            let r = run_value(&job, None, settings);
            let code = r.as_ref().err().map_or(0, CliError::exit_code);
            (outcome_json(&r), code)
        }
        Err(e) => (e.to_json(), e.exit_code()),
    }
}

fn check(input: &Input) -> (Value, i32) {
    match read_input(input) {
        Ok(Value::Array(results)) => {
            let reports: Vec<_> = results.iter().map(verify).collect();
            let ok = reports.iter().all(|r| r.passed());
            (
                Value::Array(reports.iter().map(|r| r.to_json()).collect()),
                if ok { 0 } else { 4 },
            )
        }
        Ok(result) => {
            let report = verify(&result);
            (report.to_json(), if report.passed() { 0 } else { 4 })
        }
        Err(e) => (e.to_json(), e.exit_code()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = match &cli.cmd {
        Cmd::Verify(input) => check(input),
        Cmd::Run { input, jobs } => batch(input, *jobs),
        cmd => {
            let r = match cmd {
                Cmd::Crt(i) => single(i, Command::Crt),
                Cmd::Tcm(i) => single(i, Command::TcmCheck),
                Cmd::Interp {
                    which: InterpCmd::Lagrange(i),
                } => single(i, Command::InterpLagrange),
                Cmd::Interp {
                    which: InterpCmd::Hermite(i),
                } => single(i, Command::InterpHermite),
                Cmd::Hyper {
                    which: HyperCmd::Gap(i),
                } => single(i, Command::HyperGap),
                Cmd::Hyper {
                    which: HyperCmd::Net(i),
                } => single(i, Command::HyperNet),
                Cmd::Demo {
                    which: DemoCmd::Densify(i),
                } => single(i, Command::DensifyDemo),
                Cmd::Demo {
                    which: DemoCmd::Divergence(i),
                } => single(i, Command::DivergenceDemo),
                Cmd::Verify(_) | Cmd::Run { .. } => unreachable!("handled above"),
            };
            let code = r.as_ref().err().map_or(0, CliError::exit_code);
            (outcome_json(&r), code)
        }
    };
    println!("{}", canonical(&out));
    ExitCode::from(code as u8)
}
