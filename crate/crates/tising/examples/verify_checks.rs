//! Run a few verifier checks programmatically with small instance counts.
//! The `tising verify` subcommand runs the full registry.

use tising::verify::{registry, run_check, CheckCtx};

fn main() -> tising::Result<()> {
    let names: Vec<&str> = registry().iter().map(|d| d.name).collect();
    println!("registered checks: {}", names.join(" "));

    let ctx = CheckCtx::new(1, 50);
    for name in ["fkg", "appendix", "cov_inequality", "duality"] {
        let report = run_check(name, &ctx)?;
        println!(
            "{:<16} {}  instances={} violations={} worst_margin={:12.4e}",
            report.check_name,
            if report.passed() { "PASS" } else { "FAIL" },
            report.instances,
            report.violations,
            report.worst_margin,
        );
    }
    Ok(())
}
