//! The acceptance criteria. Runs sequentially without the libtest harness so
//! every criterion prints its PASS/FAIL line with instance count and wall
//! time, then exits nonzero if any criterion failed.

use std::process::ExitCode;
use std::time::Duration;

use gnslab::random::DEFAULT_SEED;
use gnslab::suites::run_suite;

const CRITERIA: [(&str, &str); 12] = [
    ("c01 functoriality and isometry", "functoriality"),
    ("c02 monoidality", "monoidality"),
    ("c03 stinespring factorization", "stinespring"),
    ("c04 born rule", "born"),
    ("c05 eigenvalue-eigenvector link", "ee-link"),
    ("c06 collapse", "collapse"),
    ("c07 gelfand-markov duality", "gelfand"),
    ("c08 probabilistic compatibility", "compatibility"),
    ("c09 normalization", "normalization"),
    ("c10 symmetry representation", "symmetry"),
    ("c11 dinaturality", "dinaturality"),
    ("c12 scattering", "scattering"),
];

/// Unoptimized builds get this much slack over the stated budgets.
fn slack() -> u32 {
    if cfg!(debug_assertions) {
        4
    } else {
        1
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut total = Duration::ZERO;
    for (label, suite) in CRITERIA {
        let out = run_suite(suite, DEFAULT_SEED).expect("known suite");
        let budget = out.budget * slack();
        let ok = out.ok() && out.elapsed <= budget;
        println!(
            "{} {label}: {}/{} instances (need {}), {:.2?} (budget {:.0?})",
            verdict(ok),
            out.passed,
            out.instances,
            out.required,
            out.elapsed,
            budget
        );
        for f in out.failures.iter().take(5) {
            println!("    {f}");
        }
        all_ok &= ok;
        total += out.elapsed;
    }
    let budget = Duration::from_secs(60) * slack();
    let ok = total <= budget;
    println!("{} full suite: {total:.2?} (budget {budget:.0?})", verdict(ok));
    all_ok &= ok;
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
