//! Seeded L^p stability suite for the Gaussian interpolant, alpha = 4.
//!
//! Prints the per-p maxima over 20 random windows and the bounds obtained by
//! rounding them up to four significant digits, in the format of
//! `tests/data/lp_stability_bounds.json`.

use cardinal::cli::DEFAULT_SEED;
use cardinal::families::FamilySpec;
use cardinal::fundamental::{build_lhat, FrequencyGrid};
use cardinal::interpolation::{lp_stability_suite, random_window_data, Norm, XGrid};

fn round_up(v: f64, digits: i32) -> f64 {
    let e = v.abs().log10().floor() as i32 - (digits - 1);
    let s = 10f64.powi(e);
    (v / s).ceil() * s
}

fn main() {
    let radius = 32;
    let f = build_lhat(&FamilySpec::gaussian(1, 4.0), &FrequencyGrid::default_for(1)).unwrap();
    let data = random_window_data(1, radius, 20, DEFAULT_SEED).unwrap();
    let domain = XGrid::symmetric(1, radius as f64 + 4.0, 1.0 / 32.0).unwrap();
    let ps = [Norm::L1, Norm::L2, Norm::Linf];
    let ratios = lp_stability_suite(&f, &data, &ps, &domain).unwrap();
    let mut bounds = serde_json::Map::new();
    for (i, p) in ps.iter().enumerate() {
        let col: Vec<f64> = ratios.iter().map(|r| r[i]).collect();
        let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = col.iter().cloned().fold(0.0, f64::max);
        println!("p = {:>3}: min {lo:.6}, max {hi:.6}", p.label());
        bounds.insert(p.label().to_string(), round_up(hi, 4).into());
    }
    let out = serde_json::json!({
        "family": "gaussian dim=1 alpha=4",
        "window_radius": radius,
        "vectors": 20,
        "seed": DEFAULT_SEED,
        "x_half_width": radius + 4,
        "x_step": 1.0 / 32.0,
        "bounds": bounds,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
}
