//! Runs the Gaussian sweep plan shipped in `plans/` and prints the verdict.

use std::path::Path;

use cardinal::convergence::{judge, run_sweep, SweepPlan};

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../plans/gaussian.json");
    let plan = SweepPlan::from_json_file(&path).unwrap();
    let result = run_sweep(&plan).unwrap();
    for r in &result.rows {
        println!(
            "alpha {:>4}: sup {:.3e}  l2 {:.3e}  char {:.3e}  shifted {:.3e}",
            r.param, r.sup_error, r.l2_error, r.lhat_char_distance, r.shifted_mass
        );
    }
    let verdict = judge(&result, &plan);
    for c in &verdict.checks {
        println!("{:?} {}: {}", c.pass, c.name, c.detail);
    }
    println!("overall: {}", if verdict.pass { "PASS" } else { "FAIL" });
}
