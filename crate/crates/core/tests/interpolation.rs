use std::sync::OnceLock;

use cardinal::families::FamilySpec;
use cardinal::fundamental::{build_lhat, FrequencyGrid, FundamentalFunction};
use cardinal::interpolation::{
    interpolate, interpolate_grid, interpolate_grid_detailed, lp_stability, lp_stability_suite,
    random_window_data, truncation_tail_estimate, InterpolationError, LatticeData, Norm, XGrid,
};
use cardinal::paleywiener::{eval_f, sample_lattice, BandlimitedFunction};
use proptest::prelude::*;

fn gaussian() -> &'static FundamentalFunction {
    static F: OnceLock<FundamentalFunction> = OnceLock::new();
    F.get_or_init(|| build_lhat(&FamilySpec::gaussian(1, 2.0), &FrequencyGrid::default_for(1)).unwrap())
}

fn hat() -> &'static FundamentalFunction {
    static F: OnceLock<FundamentalFunction> = OnceLock::new();
    F.get_or_init(|| build_lhat(&FamilySpec::polyharmonic(1, 1), &FrequencyGrid::default_for(1)).unwrap())
}

#[test]
fn delta_data_gives_the_kernel() {
    let f = gaussian();
    let d = LatticeData::delta(1, 8, &[0]).unwrap();
    let s = LatticeData::delta(1, 8, &[3]).unwrap();
    for &x in &[-2.5, 0.0, 0.4, 6.0] {
        assert_eq!(interpolate(f, &d, &[x]).unwrap().value, f.eval_L(&[x]).unwrap());
        assert_eq!(interpolate(f, &s, &[x]).unwrap().value, f.eval_L(&[x - 3.0]).unwrap());
    }
}

#[test]
fn reproduces_samples_at_integers() {
    let f = gaussian();
    let pw = BandlimitedFunction::fejer(1);
    let d = sample_lattice(&pw, 32).unwrap();
    for k in -28..=28 {
        let v = interpolate(f, &d, &[k as f64]).unwrap().value;
        assert!((v - eval_f(&pw, &[k as f64])).abs() < 1e-6, "k {k}");
    }
}

#[test]
fn grid_matches_pointwise() {
    let f = gaussian();
    let d = random_window_data(1, 16, 1, 7).unwrap().remove(0);
    let xs: Vec<Vec<f64>> = (0..=80).map(|i| vec![-10.0 + 0.25 * i as f64]).collect();
    let g = interpolate_grid(f, &d, &xs).unwrap();
    for (x, v) in xs.iter().zip(&g) {
        assert_eq!(*v, interpolate(f, &d, x).unwrap().value);
    }
    assert_eq!(interpolate_grid(f, &d, &xs[..1]).unwrap()[0], g[0]);
}

#[test]
fn even_data_gives_even_output() {
    let f = gaussian();
    let d = LatticeData::from_points(1, 6, &[(vec![-2], 0.7), (vec![2], 0.7), (vec![0], -1.0)]).unwrap();
    for &x in &[0.3, 1.9, 5.5] {
        let a = interpolate(f, &d, &[x]).unwrap().value;
        let b = interpolate(f, &d, &[-x]).unwrap().value;
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn window_warnings() {
    let f = gaussian();
    let d = LatticeData::delta(1, 4, &[0]).unwrap();
    let out = interpolate_grid_detailed(f, &d, &[vec![2.0], vec![6.0]]).unwrap();
    assert!(out[0].warning.is_none());
    assert!(out[1].warning.is_some());
    let far = interpolate(f, &LatticeData::delta(1, 4, &[-4]).unwrap(), &[f.x_max()]).unwrap();
    assert_eq!(far.skipped, 1);
    assert!(far.warning.is_some());
}

#[test]
fn tail_estimate_shrinks_toward_the_centre() {
    let d = sample_lattice(&BandlimitedFunction::fejer(1), 32).unwrap();
    let centre = truncation_tail_estimate(&d, &[0.0], 1.0);
    let edge = truncation_tail_estimate(&d, &[30.0], 1.0);
    assert!(centre > 0.0 && centre < edge);
}

#[test]
fn hat_stability_ratios() {
    // Ratios for δ_0: sup|hat| = 1 and ∫ hat = 1.
    let d = LatticeData::delta(1, 4, &[0]).unwrap();
    let dom = XGrid::symmetric(1, 8.0, 1.0 / 64.0).unwrap();
    assert!((lp_stability(hat(), &d, Norm::Linf, &dom).unwrap() - 1.0).abs() < 1e-9);
    assert!((lp_stability(hat(), &d, Norm::L1, &dom).unwrap() - 1.0).abs() < 1e-9);
    let l2 = lp_stability(hat(), &d, Norm::L2, &dom).unwrap();
    assert!((l2 - (2.0f64 / 3.0).sqrt()).abs() < 1e-4);
}

#[test]
fn stability_errors() {
    let f = gaussian();
    let zero = LatticeData::new(1, 4, vec![0.0; 9]).unwrap();
    let dom = XGrid::symmetric(1, 8.0, 0.25).unwrap();
    assert_eq!(lp_stability(f, &zero, Norm::L2, &dom), Err(InterpolationError::UndefinedRatio));
    let narrow = XGrid::symmetric(1, 6.0, 0.25).unwrap();
    let d = LatticeData::delta(1, 4, &[0]).unwrap();
    assert!(matches!(lp_stability(f, &d, Norm::L2, &narrow), Err(InterpolationError::Domain(_))));
    assert!(lp_stability_suite(f, &[], &[Norm::L1], &dom).is_err());
}

#[test]
fn seeded_data_is_reproducible() {
    let a = random_window_data(1, 8, 3, 11).unwrap();
    let b = random_window_data(1, 8, 3, 11).unwrap();
    let c = random_window_data(1, 8, 3, 12).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.iter().all(|d| d.values().iter().all(|v| v.abs() <= 1.0)));
}

#[test]
fn data_validation() {
    assert!(LatticeData::new(1, 2, vec![0.0; 4]).is_err());
    assert!(LatticeData::new(1, 2, vec![0.0, 1.0, f64::NAN, 0.0, 0.0]).is_err());
    assert!(LatticeData::from_points(1, 2, &[(vec![3], 1.0)]).is_err());
    assert!(LatticeData::from_points(1, 2, &[(vec![0, 0], 1.0)]).is_err());
    let f2 = LatticeData::delta(2, 2, &[0, 0]).unwrap();
    assert!(matches!(interpolate(gaussian(), &f2, &[0.0, 0.0]), Err(InterpolationError::Dimension(_))));
    assert_eq!(Norm::parse("inf"), Some(Norm::Linf));
    assert_eq!(Norm::parse("3"), None);
}

fn values(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_in_the_data(a in -3.0f64..3.0, b in -3.0f64..3.0, v1 in values(17), v2 in values(17), x in -7.0f64..7.0) {
        let f = gaussian();
        let d1 = LatticeData::new(1, 8, v1).unwrap();
        let d2 = LatticeData::new(1, 8, v2).unwrap();
        let lhs = interpolate(f, &d1.combine(a, &d2, b).unwrap(), &[x]).unwrap().value;
        let i1 = interpolate(f, &d1, &[x]).unwrap().value;
        let i2 = interpolate(f, &d2, &[x]).unwrap().value;
        let scale = a.abs() * i1.abs() + b.abs() * i2.abs() + 1.0;
        prop_assert!((lhs - (a * i1 + b * i2)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn translation_equivariant(v in values(9), shift in -4i64..=4, x in -3.0f64..3.0) {
        let f = gaussian();
        // Data lives on |j| ≤ 4 inside a window of radius 8, so any |shift| ≤ 4 keeps it.
        let mut full = vec![0.0; 17];
        full[4..13].copy_from_slice(&v);
        let d = LatticeData::new(1, 8, full).unwrap();
        let moved = d.translated(&[shift]).unwrap();
        let a = interpolate(f, &moved, &[x]).unwrap().value;
        let b = interpolate(f, &d, &[x - shift as f64]).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
    }
}
