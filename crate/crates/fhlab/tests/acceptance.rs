//! The acceptance suite: one line per criterion, failing the test run if any
//! criterion fails. Run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion report.

use fhlab::acceptance;

#[test]
fn acceptance_suite() {
    let results = acceptance::run_all();
    let mut all_ok = true;
    for r in &results {
        println!("{}", r.line());
        all_ok &= r.passed;
    }
    assert!(all_ok, "acceptance criteria failed; see the report above");
}
