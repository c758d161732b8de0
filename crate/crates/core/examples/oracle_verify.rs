//! Run the randomized oracle suite and print one line per check.

use hardy_poafd::verify::{run_suite, DEFAULT_SEED};

fn main() -> hardy_poafd::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let report = run_suite(DEFAULT_SEED, trials)?;
    for c in &report.checks {
        println!(
            "{} {:<34} trials {:>4}  max error {:.2e} (tol {:.0e})",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.trials,
            c.max_error,
            c.tolerance
        );
    }
    if !report.all_passed {
        std::process::exit(1);
    }
    Ok(())
}
