//! Acceptance criteria at weight 8: one line per criterion, non-zero exit on
//! any failure.

use std::process::ExitCode;

use taufn_cli::selftest::{criteria, run_criterion, Config};

fn main() -> ExitCode {
    let cfg = Config::default();
    let mut ok = true;
    for (id, _) in criteria() {
        let o = run_criterion(id, &cfg).expect("listed criterion");
        println!(
            "criterion {}: {:<26} {} ({} checks, {:.2}s)",
            o.id,
            o.name,
            if o.pass { "PASS" } else { "FAIL" },
            o.checks,
            o.elapsed.as_secs_f64()
        );
        for f in &o.failures {
            println!("    {f}");
        }
        ok &= o.pass;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
