//! One line per acceptance criterion; fails if any criterion fails.

use std::io::Write;

use cinfty::selfcheck::{run_criterion, CRITERIA};

#[test]
fn acceptance() {
    let seed = 0x5eed;
    let mut failed = Vec::new();
    for (id, _, _) in CRITERIA {
        let r = run_criterion(id, seed);
        let status = if r.pass { "PASS" } else { "FAIL" };
        let limit = r.limit_ms.map(|l| format!(" (limit {l} ms)")).unwrap_or_default();
        // written to the raw handle so the lines survive output capture
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "criterion {} {}: {status} [{} checks, {} ms{limit}] {}", r.id, r.name, r.checks, r.elapsed_ms, r.detail);
        if !r.pass {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
