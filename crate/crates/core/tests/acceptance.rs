//! Acceptance run: one PASS/FAIL line per criterion, every comparison exact.
//! The checks behind each line follow it, indented.

use std::process::ExitCode;
use std::time::Instant;

use tightmaps::verify::{Params, Suite};

fn main() -> ExitCode {
    let params = Params::default();
    let only: Option<Vec<Suite>> = std::env::var("ACCEPTANCE_SUITES")
        .ok()
        .map(|s| s.split(',').map(|x| x.trim().parse().expect("suite name")).collect());
    let criteria = [
        (Suite::Disk, "disk equations at N = 8"),
        (Suite::Census, "census against the planar multi-boundary formula, mmax = 5"),
        (Suite::Trumpet, "census F-tables through the trumpet inversion, Lmax = 4, mmax = 5"),
        (Suite::Recursion, "boundary insertion against closed forms, N = 6"),
        (Suite::GenusOne, "genus one from moments and by insertion"),
        (Suite::Quasi, "quasi-polynomiality and the all-zero identity"),
        (Suite::Appendix, "binomial sums, moments, polynomial derivatives, trees, discrete sums"),
        (Suite::Operators, "trumpet and insertion operator identities"),
    ];
    let mut failed = 0;
    for (suite, title) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&suite)) {
            continue;
        }
        let start = Instant::now();
        let checks = suite.run(&params);
        let ok = checks.iter().all(|c| c.passed);
        if !ok {
            failed += 1;
        }
        println!("{} {}: {title} ({:.1}s)", if ok { "PASS" } else { "FAIL" }, suite.name(), start.elapsed().as_secs_f64());
        for c in &checks {
            println!("    {c}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
