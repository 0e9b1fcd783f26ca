use std::process::ExitCode;
use std::time::Instant;

use fanlab::checks::run_suite;

fn main() -> ExitCode {
    let start = Instant::now();
    let results = run_suite("all").expect("the full suite exists");
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
