//! Interpolates Fejer samples with multiquadrics of growing shape parameter
//! and prints the error on [-4, 4].

use cardinal::families::FamilySpec;
use cardinal::fundamental::{build_lhat, FrequencyGrid};
use cardinal::interpolation::{interpolate_grid, XGrid};
use cardinal::paleywiener::{eval_f, sample_lattice, BandlimitedFunction};

fn main() {
    let pw = BandlimitedFunction::fejer(1);
    let data = sample_lattice(&pw, 32).unwrap();
    let xs = XGrid::symmetric(1, 4.0, 0.02).unwrap().points();
    for &c in &[1.0, 2.0, 4.0, 8.0] {
        let spec = FamilySpec::multiquadric_vary_c(1, 0.5, c);
        let f = build_lhat(&spec, &FrequencyGrid::default_for(1)).unwrap();
        let vals = interpolate_grid(&f, &data, &xs).unwrap();
        let err = xs
            .iter()
            .zip(&vals)
            .map(|(x, v)| (v - eval_f(&pw, x)).abs())
            .fold(0.0, f64::max);
        println!("{}: sup error {err:.4e}", spec.describe());
    }
}
