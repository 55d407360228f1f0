//! The acceptance suite: one line per criterion. Criterion 8 needs a Maass
//! coefficient file (set `AUTOMORPHIC_MAASS_FILE`) and is skipped otherwise.

use automorphic::cli::accept::{run_criterion, suite, AcceptOptions, Status};

#[test]
fn acceptance() {
    let opts = AcceptOptions::default();
    let mut failed = Vec::new();
    println!();
    for id in suite(true) {
        let r = run_criterion(id, &opts);
        println!("{}", r.line());
        if r.status == Status::Fail {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
