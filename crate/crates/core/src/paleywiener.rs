//! Closed-form band-limited test functions.
//!
//! Every function here has its spectrum inside `[−π, π]^n`, exact values,
//! exact lattice samples and exact `l^p` norms of those samples.
//!
//! `FejerTriangle` is normalized so that `f(0) = 1`: it is
//! `Π_i (sin(πx_i/2) / (πx_i/2))²`, whose transform is a tensor of triangles
//! supported on `[−π, π]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interpolation::{DeclaredNorms, LatticeData};
use crate::lattice;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PaleyWienerError {
    #[error("invalid test function: {0}")]
    Invalid(String),
    #[error("length mismatch: {0}")]
    Mismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandlimitedKind {
    TensorSinc,
    FejerTriangle,
    FiniteSincCombo,
}

/// One term `c · sinc(x − j)` of a finite sinc combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComboTerm {
    pub j: Vec<i64>,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandlimitedFunction {
    pub kind: BandlimitedKind,
    pub dim: usize,
    #[serde(default)]
    pub combo_coeffs: Vec<ComboTerm>,
}

/// `sin(πt)/(πt)` with the removable singularity filled.
pub fn sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else {
        let a = PI * t;
        a.sin() / a
    }
}

impl BandlimitedFunction {
    pub fn tensor_sinc(dim: usize) -> Self {
        Self {
            kind: BandlimitedKind::TensorSinc,
            dim,
            combo_coeffs: Vec::new(),
        }
    }

    pub fn fejer(dim: usize) -> Self {
        Self {
            kind: BandlimitedKind::FejerTriangle,
            dim,
            combo_coeffs: Vec::new(),
        }
    }

    pub fn combo(dim: usize, terms: Vec<ComboTerm>) -> Result<Self, PaleyWienerError> {
        let f = Self {
            kind: BandlimitedKind::FiniteSincCombo,
            dim,
            combo_coeffs: terms,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), PaleyWienerError> {
        if self.dim == 0 {
            return Err(PaleyWienerError::Invalid("dimension must be positive".into()));
        }
        match self.kind {
            BandlimitedKind::FiniteSincCombo => {
                if self.combo_coeffs.is_empty() {
                    return Err(PaleyWienerError::Invalid("sinc combination has no terms".into()));
                }
                for t in &self.combo_coeffs {
                    if t.j.len() != self.dim || !t.c.is_finite() {
                        return Err(PaleyWienerError::Invalid(format!(
                            "bad combination term {t:?} for dimension {}",
                            self.dim
                        )));
                    }
                }
            }
            _ => {
                if !self.combo_coeffs.is_empty() {
                    return Err(PaleyWienerError::Invalid(
                        "coefficients are only meaningful for a sinc combination".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Merged combination coefficients, one per lattice point.
    fn merged_terms(&self) -> Vec<(Vec<i64>, f64)> {
        let mut out: Vec<(Vec<i64>, f64)> = Vec::new();
        for t in &self.combo_coeffs {
            match out.iter_mut().find(|(j, _)| *j == t.j) {
                Some(e) => e.1 += t.c,
                None => out.push((t.j.clone(), t.c)),
            }
        }
        out
    }

    /// Exact `l¹`, `l²` and `l^∞` norms of the full sample sequence.
    pub fn sample_norms(&self) -> DeclaredNorms {
        let n = self.dim as i32;
        match self.kind {
            BandlimitedKind::TensorSinc => DeclaredNorms {
                l1: Some(1.0),
                l2: Some(1.0),
                linf: Some(1.0),
            },
            // Samples are 1 at 0, 0 at nonzero even points and 4/(π²j²) at odd j,
            // so the sums reduce to Σ_odd 1/j² = π²/8 and Σ_odd 1/j⁴ = π⁴/96.
            BandlimitedKind::FejerTriangle => DeclaredNorms {
                l1: Some(2f64.powi(n)),
                l2: Some((4.0f64 / 3.0).powf(0.5 * n as f64)),
                linf: Some(1.0),
            },
            BandlimitedKind::FiniteSincCombo => {
                let terms = self.merged_terms();
                DeclaredNorms {
                    l1: Some(terms.iter().map(|(_, c)| c.abs()).sum()),
                    l2: Some(terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt()),
                    linf: Some(terms.iter().fold(0.0, |m, (_, c)| m.max(c.abs()))),
                }
            }
        }
    }
}

/// `f(x)`.
pub fn eval_f(f: &BandlimitedFunction, x: &[f64]) -> f64 {
    match f.kind {
        BandlimitedKind::TensorSinc => x.iter().map(|&t| sinc(t)).product(),
        BandlimitedKind::FejerTriangle => x
            .iter()
            .map(|&t| {
                let s = sinc(0.5 * t);
                s * s
            })
            .product(),
        BandlimitedKind::FiniteSincCombo => f
            .combo_coeffs
            .iter()
            .map(|term| {
                term.c
                    * x.iter()
                        .zip(&term.j)
                        .map(|(&t, &j)| sinc(t - j as f64))
                        .product::<f64>()
            })
            .sum(),
    }
}

/// Exact lattice samples on `‖j‖_∞ ≤ R` with the closed-form norms of the full
/// sequence attached.
pub fn sample_lattice(
    f: &BandlimitedFunction,
    window_radius: u32,
) -> Result<LatticeData, PaleyWienerError> {
    f.validate()?;
    if window_radius == 0 {
        return Err(PaleyWienerError::Invalid("window radius must be at least 1".into()));
    }
    let r = window_radius as i64;
    let points = lattice::cube_points(f.dim, r);
    let values: Vec<f64> = match f.kind {
        BandlimitedKind::TensorSinc => points
            .iter()
            .map(|j| if j.iter().all(|&c| c == 0) { 1.0 } else { 0.0 })
            .collect(),
        BandlimitedKind::FejerTriangle => points
            .iter()
            .map(|j| {
                j.iter()
                    .map(|&c| match c {
                        0 => 1.0,
                        c if c % 2 == 0 => 0.0,
                        c => 4.0 / (PI * PI * (c * c) as f64),
                    })
                    .product()
            })
            .collect(),
        BandlimitedKind::FiniteSincCombo => {
            let mut v = vec![0.0; points.len()];
            for (j, c) in f.merged_terms() {
                if let Some(i) = lattice::cube_index(&j, r) {
                    v[i] = c;
                }
            }
            v
        }
    };
    LatticeData::new(f.dim, window_radius, values)
        .and_then(|d| d.with_declared_norms(f.sample_norms()))
        .map_err(|e| PaleyWienerError::Invalid(e.to_string()))
}

/// `(Σ |I(x) − f(x)|² h^n)^{1/2}` over a uniform grid with weight `h^n`.
pub fn l2_distance(
    f: &BandlimitedFunction,
    interpolant: &[f64],
    points: &[Vec<f64>],
    weight: f64,
) -> Result<f64, PaleyWienerError> {
    if interpolant.len() != points.len() {
        return Err(PaleyWienerError::Mismatch(format!(
            "{} interpolant values for {} grid points",
            interpolant.len(),
            points.len()
        )));
    }
    if !(weight > 0.0) {
        return Err(PaleyWienerError::Invalid("quadrature weight must be positive".into()));
    }
    let s: f64 = interpolant
        .iter()
        .zip(points)
        .map(|(v, x)| {
            let d = v - eval_f(f, x);
            d * d
        })
        .sum();
    Ok((s * weight).sqrt())
}
