//! Runs the acceptance suite with the default configuration and prints one
//! line per criterion. Uses its own `main` so the lines are never captured.

use std::process::ExitCode;

use fanokit::harness::{run_acceptance_suite, RunConfig};

fn main() -> ExitCode {
    let summary = run_acceptance_suite(&RunConfig::default());
    for line in summary.lines() {
        println!("{line}");
    }
    let failed = summary.criteria.iter().filter(|c| !c.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        summary.criteria.len() - failed
    );
    if summary.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
