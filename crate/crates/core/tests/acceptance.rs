//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances and time limits live in `odplab::suite`.

use std::process::ExitCode;

use odplab::suite::{Suite, SuiteConfig};

fn main() -> ExitCode {
    let suite = match Suite::new(SuiteConfig::default()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot build corpus: {}", e);
            return ExitCode::FAILURE;
        }
    };
    println!("corpus: {} instances", suite.corpus().len());
    let mut failed = 0;
    for id in 1..=13 {
        let r = suite.run(id);
        println!("{}", r);
        if !r.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {} failed", 13 - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
