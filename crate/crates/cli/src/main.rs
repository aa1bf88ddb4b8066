//! `berkolab`: one subcommand per kernel, JSON reports on stdout.
//!
//! Exit status 2 marks a usage error, 3 a precision shortfall and 4 a
//! mathematical obstruction; the report says which.

mod args;
mod parse;
mod run;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    let outcome = run::dispatch(&cli);
    let input = serde_json::to_value(&cli).expect("arguments serialize");
    let command = input["command"].as_object().and_then(|o| o.keys().next().cloned()).unwrap_or_default();
    let mut report = json!({ "command": command, "input": input });
    let code = match outcome {
        Ok(result) => {
            report["result"] = result;
            0
        }
        Err(f) => {
            eprintln!("berkolab: {}", f.message());
            report["error"] = json!({ "kind": f.kind(), "message": f.message() });
            f.exit_code()
        }
    };
    report["wall_time_us"] = Value::from(start.elapsed().as_micros() as u64);
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    // A closed pipe on stdout is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("berkolab: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code as u8)
}
