//! Acceptance criteria 1 to 11, each under its wall-clock budget. Prints one
//! line per criterion and exits nonzero if any criterion fails.

use std::time::Instant;

use laurentcc_core::report::Status;
use laurentcc_core::suites::{Criterion, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { seed: 7, ..Default::default() };
    let mut failed = Vec::new();
    for c in Criterion::ALL {
        let start = Instant::now();
        let checks = c.run(&cfg);
        let elapsed = start.elapsed();
        let bad: Vec<_> = checks.iter().filter(|k| k.status == Status::Fail).collect();
        let late = c.time_limit().is_some_and(|limit| elapsed > limit);
        let limit = c.time_limit().map_or("none".to_string(), |l| format!("{} s", l.as_secs()));
        let verdict = if bad.is_empty() && !late { "PASS" } else { "FAIL" };
        println!("criterion {c}: {verdict} ({} checks, {:.2} s, limit {limit})", checks.len(), elapsed.as_secs_f64());
        for k in &bad {
            println!("    failed: {}", k.name);
            for w in &k.witnesses {
                println!("        {w}");
            }
        }
        if verdict == "FAIL" {
            failed.push(c.number());
        }
    }
    if !failed.is_empty() {
        eprintln!("criteria {failed:?} failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", Criterion::ALL.len());
}
