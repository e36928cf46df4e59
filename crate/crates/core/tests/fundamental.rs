use std::f64::consts::PI;

use cardinal::families::FamilySpec;
use cardinal::fundamental::{build_lhat, FrequencyGrid, FundamentalError};

fn hat(x: f64) -> f64 {
    (1.0 - x.abs()).max(0.0)
}

fn grid(dim: usize) -> FrequencyGrid {
    FrequencyGrid::default_for(dim)
}

#[test]
fn hat_function_oracle() {
    let f = build_lhat(&FamilySpec::polyharmonic(1, 1), &grid(1)).unwrap();
    let worst = (0..=600)
        .map(|i| {
            let x = -3.0 + 0.01 * i as f64;
            (f.eval_L(&[x]).unwrap() - hat(x)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst}");
}

#[test]
fn linear_spline_transform() {
    let f = build_lhat(&FamilySpec::polyharmonic(1, 1), &grid(1)).unwrap();
    for (i, lam) in f.normalized_values().iter().enumerate() {
        let xi = f.grid_point(i)[0];
        let s = (0.5 * xi).sin();
        let want = 4.0 * s * s / (xi * xi);
        assert!((lam - want).abs() < 1e-12, "xi {xi}: {lam} vs {want}");
    }
}

#[test]
fn gaussian_at_cell_edge() {
    let g = FrequencyGrid::new(1, 4, 64, false).unwrap();
    let spec = FamilySpec::gaussian(1, 1.0);
    let f = build_lhat(&spec, &g).unwrap();
    let i = (0..f.normalized_values().len())
        .find(|&i| (f.grid_point(i)[0] - PI).abs() < 1e-12)
        .expect("pi is a node of the unshifted grid");
    let denom: f64 = (-40i64..=40)
        .map(|j| (-(PI + 2.0 * PI * j as f64).powi(2) + PI * PI).exp())
        .sum();
    let lam = f.normalized_values()[i];
    assert!((lam - 1.0 / denom).abs() < 1e-15);
    assert!(lam <= 0.5);
}

#[test]
fn transparent_bound_and_evenness() {
    for spec in [
        FamilySpec::polyharmonic(1, 3),
        FamilySpec::gaussian(1, 2.0),
        FamilySpec::multiquadric_vary_c(1, 0.5, 2.0),
        FamilySpec::multiquadric_vary_alpha(1, 1.5, 1.0),
    ] {
        let f = build_lhat(&spec, &grid(1)).unwrap();
        let v = f.normalized_values();
        assert!(v.iter().all(|x| (0.0..=1.0).contains(x)), "{}", spec.describe());
        let n = v.len();
        for i in 0..n / 2 {
            assert_eq!(v[i], v[n - 1 - i], "{}", spec.describe());
        }
        let lhat = f.lhat_values();
        assert!((lhat[n / 2] * (2.0 * PI).sqrt() - v[n / 2]).abs() < 1e-15);
    }
}

#[test]
fn partition_identity_within_tail_bound() {
    for spec in [FamilySpec::polyharmonic(1, 2), FamilySpec::gaussian(1, 1.0)] {
        let f = build_lhat(&spec, &grid(1)).unwrap();
        let g = f.grid;
        let m = g.points_per_cell as usize;
        let cells = 2 * g.cells_j as usize + 1;
        let v = f.normalized_values();
        let mut mean_gap = 0.0;
        for b in 0..m {
            let s: f64 = (0..cells).map(|c| v[c * m + b]).sum();
            assert!(s <= 1.0 + 1e-14);
            mean_gap += (1.0 - s) / m as f64;
        }
        assert!(mean_gap <= f.tail_bound * (1.0 + 1e-12) + 1e-15, "{}", spec.describe());
    }
}

#[test]
fn shifted_cells_are_dominated() {
    for spec in [
        FamilySpec::polyharmonic(1, 2),
        FamilySpec::gaussian(2, 2.0),
        FamilySpec::multiquadric_vary_c(1, 0.5, 4.0),
    ] {
        let f = build_lhat(&spec, &grid(spec.dim)).unwrap();
        assert!(f.domination_holds().unwrap(), "{}", spec.describe());
        assert!(f.shifted_mass() <= f.ratio_envelope().unwrap());
    }
}

#[test]
fn cardinality_one_dimension() {
    for spec in [
        FamilySpec::polyharmonic(1, 1),
        FamilySpec::polyharmonic(1, 3),
        FamilySpec::gaussian(1, 1.0),
        FamilySpec::gaussian(1, 4.0),
        FamilySpec::multiquadric_vary_c(1, 0.5, 1.0),
        FamilySpec::multiquadric_vary_c(1, 0.5, 4.0),
    ] {
        let f = build_lhat(&spec, &grid(1)).unwrap();
        let d = f.cardinality_check(5).unwrap();
        assert!(d <= 1e-6, "{}: {d}", spec.describe());
    }
}

#[test]
fn cardinality_two_dimensions() {
    for spec in [FamilySpec::polyharmonic(2, 3), FamilySpec::gaussian(2, 2.0)] {
        let f = build_lhat(&spec, &grid(2)).unwrap();
        let d = f.cardinality_check(5).unwrap();
        assert!(d <= 1e-4, "{}: {d}", spec.describe());
    }
}

#[test]
fn spline_path_agrees_with_quadrature() {
    let f = build_lhat(&FamilySpec::polyharmonic(1, 3), &grid(1)).unwrap();
    for i in 0..=40 {
        let x = -5.0 + 0.25 * i as f64;
        let a = f.eval_L(&[x]).unwrap();
        let b = f.eval_L_quadrature(&[x]).unwrap();
        // At x = 0 the gap is the missing mass itself, plus the trapezoid
        // error of the stored part.
        assert!((a - b).abs() <= f.tail_bound + 1e-12, "x {x}: {a} vs {b}");
    }
}

#[test]
fn refinement_is_stable() {
    let spec = FamilySpec::gaussian(1, 4.0);
    let coarse = build_lhat(&spec, &grid(1)).unwrap();
    let fine = build_lhat(&spec, &FrequencyGrid::new(1, 8, 512, true).unwrap()).unwrap();
    let wide = build_lhat(&spec, &FrequencyGrid::new(1, 16, 256, true).unwrap()).unwrap();
    for i in 0..32 {
        let x = -7.75 + 0.5 * i as f64;
        let c = coarse.eval_L(&[x]).unwrap();
        assert!((c - fine.eval_L(&[x]).unwrap()).abs() < 1e-6, "x {x}");
        assert!((c - wide.eval_L(&[x]).unwrap()).abs() <= coarse.tail_bound + 1e-15, "x {x}");
    }
}

#[test]
fn spatial_evenness() {
    let f = build_lhat(&FamilySpec::multiquadric_vary_c(1, 0.5, 2.0), &grid(1)).unwrap();
    for &x in &[0.3, 1.7, 4.25, 9.9] {
        assert_eq!(f.eval_L(&[x]).unwrap(), f.eval_L(&[-x]).unwrap());
    }
}

#[test]
fn decay_weighted_sup() {
    let f = build_lhat(&FamilySpec::polyharmonic(1, 1), &grid(1)).unwrap();
    let pts: Vec<Vec<f64>> = (0..=160).map(|i| vec![-8.0 + 0.1 * i as f64]).collect();
    assert!((f.decay_check(&pts).unwrap() - 1.0).abs() < 1e-9);
    let g = build_lhat(&FamilySpec::gaussian(1, 1.0), &grid(1)).unwrap();
    let c = g.decay_check(&pts).unwrap();
    assert!(c.is_finite() && c >= 1.0 - 1e-9);
}

#[test]
fn distance_to_characteristic_function_shrinks() {
    let d: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|&a| build_lhat(&FamilySpec::gaussian(1, a), &grid(1)).unwrap().lhat_sup_distance_to_char())
        .collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
}

#[test]
fn derivative_probe_is_finite() {
    let f = build_lhat(&FamilySpec::gaussian(1, 1.0), &grid(1)).unwrap();
    assert!(f.derivative_probe(1).unwrap().is_finite());
    assert!(f.derivative_probe(2).unwrap().is_finite());
    assert!(f.derivative_probe(3).is_err());
}

#[test]
fn domain_and_grid_errors() {
    let f = build_lhat(&FamilySpec::gaussian(1, 1.0), &grid(1)).unwrap();
    assert!(matches!(f.eval_L(&[f.x_max() + 1.0]), Err(FundamentalError::Domain(_))));
    assert!(f.eval_L(&[0.0, 0.0]).is_err());
    assert!(FrequencyGrid::new(1, 8, 255, true).is_err());
    assert!(FrequencyGrid::new(1, 0, 256, true).is_err());
}

#[test]
fn cubic_cardinal_spline_closed_form() {
    // L = Σ_l √3 (√3 − 2)^{|l|} M_4(x − l) with the centred cubic B-spline M_4.
    fn m4(x: f64) -> f64 {
        let x = x.abs();
        if x < 1.0 {
            2.0 / 3.0 - x * x + 0.5 * x * x * x
        } else if x < 2.0 {
            (2.0 - x).powi(3) / 6.0
        } else {
            0.0
        }
    }
    let s3 = 3f64.sqrt();
    let oracle = |x: f64| (-60i32..=60).map(|l| s3 * (s3 - 2.0).powi(l.abs()) * m4(x - l as f64)).sum::<f64>();
    let f = build_lhat(&FamilySpec::polyharmonic(1, 2), &grid(1)).unwrap();
    for i in 0..=160 {
        let x = -8.0 + 0.1 * i as f64;
        assert!((f.eval_L(&[x]).unwrap() - oracle(x)).abs() < 1e-13, "x {x}");
    }
}
