//! Regularity report for the polyharmonic ladder k = 2, 3, 4 in one dimension.

use cardinal::families::{regularity_report, FamilySpec};

fn main() {
    let specs: Vec<FamilySpec> = (2..=4).map(|k| FamilySpec::polyharmonic(1, k)).collect();
    let report = regularity_report(&specs, 101, 6).unwrap();
    for row in &report.per_j {
        println!("j = {:>3}: {:?}", row.j[0], row.max_ratio);
    }
    println!("dominator sum {:.6e} (tail {:.2e})", report.r2_dominator.total, report.r2_dominator.tail_bound);
    println!("R1 nonincreasing: {}, R2 summable: {}", report.r1_nonincreasing, report.r2_summable);
}
