//! JSON front end for `crat-core`.
//!
//! A job is `{"command", "ring", "payload"}`; [`run`] turns it into a result
//! that embeds the job and every certificate, and [`verify`] re-checks such a
//! result from scratch. Output is canonical: keys sorted, rationals as
//! `"num/den"` strings.

pub mod codec;
pub mod error;
pub mod job;
pub mod verify;

pub use error::{CliError, CliResult};
pub use job::{run, Command, JobSpec, Settings};
pub use verify::{verify, VerifyReport};

use crat_core::exec::{with_threads, Execution};
use serde_json::Value;

/// Compact serialization with sorted keys.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialize")
}

pub fn parse_json(text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::schema(format!("invalid JSON: {e}")))
}

/// Parses and runs one job; `expect` pins the command (see [`JobSpec::parse`]).
pub fn run_value(job: &Value, expect: Option<Command>, settings: Settings) -> CliResult<Value> {
    run(&JobSpec::parse(job, expect)?, settings)
}

/// Runs independent jobs on `threads` workers (0 = one per core). Results
/// keep the input order.
pub fn run_batch(jobs: &[Value], settings: Settings, threads: usize) -> Vec<CliResult<Value>> {
    with_threads(threads, || {
        Execution::available().map(jobs, |j| run_value(j, None, settings))
    })
}

/// The JSON a result or failure is reported as.
pub fn outcome_json(r: &CliResult<Value>) -> Value {
    match r {
        Ok(v) => v.clone(),
        Err(e) => e.to_json(),
    }
}
