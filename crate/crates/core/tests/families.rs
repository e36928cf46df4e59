use std::f64::consts::PI;

use cardinal::families::{
    fitted_decay_slope, log_phi_hat, m_ratio, periodization, periodization_ratio, phi_hat,
    regularity_report, FamilyError, FamilyKind, FamilySpec,
};
use cardinal::specfun::{bessel_k, BesselEvalConfig};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn transform_examples() {
    let p = FamilySpec::polyharmonic(1, 1);
    assert!(rel(phi_hat(&p, &[PI]).unwrap(), PI.powi(-2)) < 1e-15);
    assert_eq!(phi_hat(&FamilySpec::gaussian(1, 1.0), &[0.0]).unwrap(), 1.0);
    let mq = FamilySpec::multiquadric_vary_c(1, 0.5, 1.0);
    let k1 = bessel_k(1.0, 1.0, &BesselEvalConfig::default()).unwrap();
    assert!(rel(phi_hat(&mq, &[1.0]).unwrap(), k1) < 1e-10);
    assert!(rel(k1, 0.601_907_230_197_234_6) < 1e-10);
}

#[test]
fn log_transform_examples() {
    let g = FamilySpec::gaussian(1, 16.0);
    assert!(rel(log_phi_hat(&g, &[3.0 * PI]).unwrap(), -16.0 * 9.0 * PI * PI) < 1e-15);
    let p = FamilySpec::polyharmonic(1, 3);
    assert!(rel(log_phi_hat(&p, &[2.0 * PI]).unwrap(), -6.0 * (2.0 * PI).ln()) < 1e-15);

    // Hankel expansion of K_1 at 50π, four terms.
    let mq = FamilySpec::multiquadric_vary_c(1, 0.5, 50.0);
    let z = 50.0 * PI;
    let w = 8.0 * z;
    let series = 1.0 + 3.0 / w - 15.0 / (2.0 * w * w) + 315.0 / (6.0 * w * w * w);
    let log_k1 = 0.5 * (PI / (2.0 * z)).ln() - z + series.ln();
    let want = (50.0 / PI).ln() + log_k1;
    let got = log_phi_hat(&mq, &[PI]).unwrap();
    assert!(got.is_finite());
    assert!((got - want).abs() < 1e-9 * want.abs(), "{got} vs {want}");
}

#[test]
fn singular_families_reject_origin() {
    for spec in [FamilySpec::polyharmonic(1, 2), FamilySpec::multiquadric_vary_alpha(1, 0.5, 1.0)] {
        assert!(matches!(phi_hat(&spec, &[0.0]), Err(FamilyError::Domain(_))));
    }
}

#[test]
fn spec_validation() {
    assert!(FamilySpec::polyharmonic(2, 2).validate().is_err());
    assert!(FamilySpec::polyharmonic(2, 3).validate().is_ok());
    assert!(FamilySpec::polyharmonic(1, 1).validate().is_ok());
    assert!(FamilySpec::gaussian(1, 0.5).validate().is_err());
    assert!(FamilySpec::multiquadric_vary_alpha(1, 2.0, 1.0).validate().is_err());
    assert!(FamilySpec::multiquadric_vary_alpha(1, 0.25, 1.0).validate().is_err());
    assert!(FamilySpec::multiquadric_vary_c(1, 0.5, 0.5).validate().is_err());
    assert!(FamilySpec::multiquadric_vary_c(1, -1.5, 1.0).validate().is_ok());
    assert!(FamilySpec::multiquadric_vary_c(1, -1.0, 1.0).validate().is_err());
    assert!(FamilySpec::multiquadric_vary_c(2, -2.5, 1.0).validate().is_ok());
    assert!(FamilySpec::multiquadric_vary_c(2, -1.5, 1.0).validate().is_err());
    assert_eq!(FamilyKind::parse("gaussian"), Some(FamilyKind::Gaussian));
}

#[test]
fn polyharmonic_lattice_identity() {
    // Σ_j (ξ − 2πj)^{-2} = 1 / (4 sin²(ξ/2)).
    let p = FamilySpec::polyharmonic(1, 1);
    let xi = PI / 2.0;
    let u = periodization(&p, &[xi], 16).unwrap();
    let want = 0.5 - 4.0 / (PI * PI);
    assert!(rel(u.value(), want) < 1e-10, "{} vs {want}", u.value());
    // The oracle itself carries rounding from the cancellation against ξ^{-2}.
    let rounding = 64.0 * f64::EPSILON / (4.0 * (xi / 2.0).sin().powi(2));
    assert!((u.value() - want).abs() <= u.residual_bound + rounding);
}

#[test]
fn gaussian_lattice_sum() {
    let g = FamilySpec::gaussian(1, 1.0);
    let u = periodization(&g, &[0.0], 4).unwrap();
    let want: f64 = 2.0 * (1..=4).map(|j| (-4.0 * PI * PI * (j * j) as f64).exp()).sum::<f64>();
    assert!(rel(u.value(), want) < 1e-14);
    assert!(rel(u.value(), 2.0 * (-4.0 * PI * PI).exp()) < 1e-12);
}

#[test]
fn short_truncation_names_required_j() {
    let mq = FamilySpec::multiquadric_vary_c(1, 0.5, 1.0);
    match periodization_ratio(&mq, &[0.5], 1) {
        Err(FamilyError::Truncation { trunc_j, required_j, .. }) => {
            assert_eq!(trunc_j, 1);
            assert!(required_j > 1);
            assert!(periodization_ratio(&mq, &[0.5], required_j).is_ok());
        }
        other => panic!("expected a truncation error, got {other:?}"),
    }
}

#[test]
fn ratio_examples() {
    let p = FamilySpec::polyharmonic(1, 2);
    let got = m_ratio(&p, &[1], &[0.3 * PI]).unwrap();
    assert!(rel(got, (0.3f64 / 2.3).powi(4)) < 1e-13);
    let g = FamilySpec::gaussian(1, 1.0);
    assert!(rel(m_ratio(&g, &[1], &[0.0]).unwrap(), (-4.0 * PI * PI).exp()) < 1e-12);
}

#[test]
fn polyharmonic_ratio_bound_is_exact() {
    for k in 1..=3u32 {
        let p = FamilySpec::polyharmonic(1, k);
        for i in 0..101 {
            let xi = -PI + (i as f64 + 0.25) * 2.0 * PI / 101.0;
            for j in 1..=10i64 {
                let bound = ((2 * j - 1) as f64).powi(-2 * k as i32);
                for s in [j, -j] {
                    assert!(m_ratio(&p, &[s], &[xi]).unwrap() <= bound, "k {k} j {s} xi {xi}");
                }
            }
        }
    }
}

#[test]
fn multiquadric_envelope_bound() {
    let ratios: Vec<f64> = [1.0, 2.0, 4.0]
        .iter()
        .map(|&c| {
            let s = FamilySpec::multiquadric_vary_c(1, 0.5, c);
            (0..101)
                .map(|i| m_ratio(&s, &[2], &[-PI + (i as f64 + 0.25) * 2.0 * PI / 101.0]).unwrap())
                .fold(0.0, f64::max)
        })
        .collect();
    let bound = 3f64.powf(-1.5) * (-2.0 * PI).exp();
    for r in &ratios {
        assert!(*r <= bound, "{r} > {bound}");
    }
    assert!(ratios.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn decay_fits() {
    for k in 1..=4u32 {
        let s = fitted_decay_slope(&FamilySpec::polyharmonic(1, k), 10.0 * PI, 100.0 * PI).unwrap();
        assert!((s + 2.0 * k as f64).abs() < 1e-9);
    }
    let g = fitted_decay_slope(&FamilySpec::gaussian(1, 1.0), 10.0 * PI, 100.0 * PI).unwrap();
    assert!(g < -100.0);
    let m = fitted_decay_slope(&FamilySpec::multiquadric_vary_c(1, 0.5, 1.0), 10.0 * PI, 100.0 * PI).unwrap();
    assert!(m < -20.0);
}

#[test]
fn regularity_report_polyharmonic() {
    let specs: Vec<FamilySpec> = (2..=4).map(|k| FamilySpec::polyharmonic(1, k)).collect();
    let r = regularity_report(&specs, 101, 10).unwrap();
    assert!(r.r1_nonincreasing);
    assert!(r.r2_summable);
    assert!(r.h2_delta.iter().all(|d| *d > 0.0));
    let row = r.per_j.iter().find(|row| row.j == vec![2]).unwrap();
    for (k, m) in (2..=4).zip(&row.max_ratio) {
        assert!(rel(*m, 3f64.powi(-2 * k)) < 1e-12, "k {k}: {m}");
    }
    assert!(row.max_ratio.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn regularity_report_gaussian_min_at_corners() {
    let specs: Vec<FamilySpec> = [1.0, 2.0, 4.0].iter().map(|&a| FamilySpec::gaussian(2, a)).collect();
    let r = regularity_report(&specs, 21, 3).unwrap();
    for (a, d) in [1.0f64, 2.0, 4.0].iter().zip(&r.h2_delta) {
        assert!(rel(*d, (-a * 2.0 * PI * PI).exp()) < 1e-12);
    }
    assert!(r.r1_nonincreasing && r.r2_summable, "{:?}", r.violations);
}

#[test]
fn regularity_report_rejects_mixed_kinds() {
    let specs = [FamilySpec::gaussian(1, 1.0), FamilySpec::polyharmonic(1, 2)];
    let none: [FamilySpec; 0] = [];
    assert!(regularity_report(&specs, 11, 2).is_err());
    assert!(regularity_report(&none, 11, 2).is_err());
}

fn any_spec() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (1u32..=6).prop_map(|k| FamilySpec::polyharmonic(1, k)),
        (1.0f64..16.0).prop_map(|a| FamilySpec::gaussian(1, a)),
        (0usize..4, 1.0f64..8.0).prop_map(|(i, c)| FamilySpec::multiquadric_vary_c(1, [0.5, 1.5, 2.5, -1.5][i], c)),
        (0usize..4).prop_map(|i| FamilySpec::multiquadric_vary_alpha(1, [0.5, 1.5, 3.5, 7.5][i], 1.0)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_is_even(spec in any_spec(), xi in 0.01f64..40.0) {
        prop_assert_eq!(log_phi_hat(&spec, &[xi]).unwrap(), log_phi_hat(&spec, &[-xi]).unwrap());
        prop_assert_eq!(phi_hat(&spec, &[xi]).ok(), phi_hat(&spec, &[-xi]).ok());
    }

    #[test]
    fn periodization_is_even(spec in any_spec(), xi in 0.01f64..PI) {
        let j = spec.default_trunc_j().unwrap();
        let a = periodization_ratio(&spec, &[xi], j).unwrap();
        let b = periodization_ratio(&spec, &[-xi], j).unwrap();
        prop_assert!((a.value() - b.value()).abs() <= 1e-14 * a.value().max(1e-300));
    }

    #[test]
    fn log_ratio_matches_direct_quotient(spec in any_spec(), xi in 0.01f64..PI, j in -6i64..=6) {
        prop_assume!(j != 0);
        let (lo, hi) = match (phi_hat(&spec, &[xi]), phi_hat(&spec, &[xi + 2.0 * PI * j as f64])) {
            (Ok(lo), Ok(hi)) => (lo, hi),
            _ => return Ok(()),
        };
        prop_assume!(lo.is_normal() && hi.is_normal());
        let direct = hi / lo;
        prop_assume!(direct.is_normal());
        prop_assert!(rel(m_ratio(&spec, &[j], &[xi]).unwrap(), direct) < 1e-10);
    }

    #[test]
    fn extra_shell_stays_inside_tail_bound(spec in any_spec(), xi in -PI..PI) {
        prop_assume!(xi.abs() > 1e-3);
        let j = spec.default_trunc_j().unwrap();
        let a = periodization_ratio(&spec, &[xi], j).unwrap();
        let b = periodization_ratio(&spec, &[xi], j + 1).unwrap();
        prop_assert!((a.value() - b.value()).abs() <= a.tail_bound);
    }
}
