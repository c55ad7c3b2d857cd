//! End-to-end runs of `full` for q = 5, 7, 9, 11, 13, printing each report's
//! checks. The same reports come from the `conicpart` binary.
//!
//! cargo run --release --example full_pipeline

use conicpart::run::{run, Command, RunConfig, Status};

fn main() -> conicpart::Result<()> {
    for (p, h) in [(5u64, 1u32), (7, 1), (3, 2), (11, 1), (13, 1)] {
        let report = run(&RunConfig::new(p, h, Command::Full))?;
        let secs: f64 = report.timings.values().sum();
        println!("q = {}: {} ({secs:.2} s)", p.pow(h), if report.passed() { "pass" } else { "FAIL" });
        for c in &report.checks {
            match c.status {
                Status::Skipped => println!("  {:<30} skipped ({})", c.name, c.reason.as_deref().unwrap_or("")),
                s => println!("  {:<30} {:?}: {}", c.name, s, c.observed),
            }
        }
    }
    Ok(())
}
