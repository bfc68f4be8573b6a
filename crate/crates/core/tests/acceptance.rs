//! Acceptance criteria 1-10, one line each. Runs without the libtest harness
//! so the lines are always shown; exits nonzero if any criterion fails.

use std::process::Command;

use qweyl::cli::suite::{criteria, run_criterion, SuiteOptions, Z_LEVEL_FIVE, Z_LEVEL_THREE};
use qweyl::cli::Verdict;

/// The first stdout line of `qweyl z-element --ell <ell>`.
fn cli_z(ell: u32) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qweyl"))
        .args(["z-element", "--ell", &ell.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit status {:?}", out.status.code()));
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    Ok(text.lines().next().unwrap_or_default().to_string())
}

fn main() {
    let opts = SuiteOptions::default();
    let mut failed = Vec::new();
    for c in criteria() {
        let mut result = run_criterion(&c, &opts);
        if c.id == 1 {
            for (ell, golden) in [(3, Z_LEVEL_THREE), (5, Z_LEVEL_FIVE)] {
                match cli_z(ell) {
                    Ok(line) if line == golden => {}
                    Ok(line) => {
                        result.verdict = Verdict::Fail;
                        eprintln!("  qweyl z-element --ell {ell} printed {line}");
                    }
                    Err(e) => {
                        result.verdict = Verdict::Fail;
                        eprintln!("  qweyl z-element --ell {ell}: {e}");
                    }
                }
            }
        }
        println!("{} [{:.2} s]", result.summary(), result.elapsed.as_secs_f64());
        for check in result.checks.iter().filter(|k| k.failed()) {
            println!("    {}: {}", check.name, check.witness.as_deref().unwrap_or(""));
        }
        if result.verdict == Verdict::Fail {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
