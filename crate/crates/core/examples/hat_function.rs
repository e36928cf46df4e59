//! The polyharmonic k = 1 fundamental function is the hat max(0, 1 - |x|).

use cardinal::families::FamilySpec;
use cardinal::fundamental::{build_lhat, FrequencyGrid};

fn main() {
    let f = build_lhat(&FamilySpec::polyharmonic(1, 1), &FrequencyGrid::default_for(1)).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=600 {
        let x = -3.0 + 0.01 * i as f64;
        let l = f.eval_L(&[x]).unwrap();
        worst = worst.max((l - (1.0 - x.abs()).max(0.0)).abs());
        if i % 50 == 0 {
            println!("{x:>6.2} {l:>22.16}");
        }
    }
    println!("max deviation from the hat on [-3, 3]: {worst:.3e}");
    println!("cardinality deviation, |k| <= 5: {:.3e}", f.cardinality_check(5).unwrap());
}
