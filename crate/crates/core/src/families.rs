//! Interpolator families and their (constant-normalized) Fourier transforms.
//!
//! Three families are supported: polyharmonic splines `‖ξ‖^{−2k}`, Gaussians
//! `e^{−α‖ξ‖²}` and multiquadrics `(‖ξ‖/c)^{−α−n/2} K_{n/2+α}(c‖ξ‖)`, the last
//! one either with `c` fixed and `α` as the family parameter or the other way
//! round. Positive constant factors are dropped everywhere: the fundamental
//! function only depends on `φ̂` up to a positive multiple, and the dropped
//! multiquadric prefactor `2^{1+α}/Γ(−α)` changes sign with `α`.
//!
//! All transforms are radial and strictly decreasing in `‖ξ‖`, which is what
//! the lattice tail majorants below rely on.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use statrs::function::gamma::ln_gamma;

use crate::lattice;
use crate::specfun::{self, BesselEvalConfig, SpecfunError};

const TWO_PI: f64 = 2.0 * PI;

/// Relative size of the unresolved lattice tail that `periodization` accepts.
pub const PERIODIZATION_REL_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("lattice sum truncated at J={trunc_j} leaves a tail of {residual:.3e} relative to {value:.3e}; use J >= {required_j}")]
    Truncation {
        trunc_j: u32,
        required_j: u32,
        residual: f64,
        value: f64,
    },
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Polyharmonic,
    Gaussian,
    MultiquadricVaryAlpha,
    MultiquadricVaryC,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Polyharmonic => "polyharmonic",
            FamilyKind::Gaussian => "gaussian",
            FamilyKind::MultiquadricVaryAlpha => "multiquadric_vary_alpha",
            FamilyKind::MultiquadricVaryC => "multiquadric_vary_c",
        }
    }

    /// Accepts the canonical names plus a few short aliases.
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "polyharmonic" | "poly" => Some(FamilyKind::Polyharmonic),
            "gaussian" | "gauss" => Some(FamilyKind::Gaussian),
            "multiquadric_vary_alpha" | "mq_alpha" => Some(FamilyKind::MultiquadricVaryAlpha),
            "multiquadric_vary_c" | "mq_c" | "multiquadric" => Some(FamilyKind::MultiquadricVaryC),
            _ => None,
        }
    }
}

/// One member of an interpolator family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub dim: usize,
    /// Polyharmonic order (ignored by the other kinds).
    #[serde(default = "one_u32")]
    pub k: u32,
    /// Gaussian scale or multiquadric exponent.
    #[serde(default = "one_f64")]
    pub alpha: f64,
    /// Multiquadric shape parameter.
    #[serde(default = "one_f64")]
    pub c: f64,
    /// Algebraic decay exponent `n + ε` of `φ̂` used for tail bounds.
    #[serde(default)]
    pub decay_exponent: Option<f64>,
}

fn one_u32() -> u32 {
    1
}

fn one_f64() -> f64 {
    1.0
}

impl FamilySpec {
    pub fn polyharmonic(dim: usize, k: u32) -> Self {
        Self {
            kind: FamilyKind::Polyharmonic,
            dim,
            k,
            alpha: 1.0,
            c: 1.0,
            decay_exponent: None,
        }
    }

    pub fn gaussian(dim: usize, alpha: f64) -> Self {
        Self {
            kind: FamilyKind::Gaussian,
            dim,
            k: 1,
            alpha,
            c: 1.0,
            decay_exponent: None,
        }
    }

    pub fn multiquadric_vary_alpha(dim: usize, alpha: f64, c: f64) -> Self {
        Self {
            kind: FamilyKind::MultiquadricVaryAlpha,
            dim,
            k: 1,
            alpha,
            c,
            decay_exponent: None,
        }
    }

    pub fn multiquadric_vary_c(dim: usize, alpha: f64, c: f64) -> Self {
        Self {
            kind: FamilyKind::MultiquadricVaryC,
            dim,
            k: 1,
            alpha,
            c,
            decay_exponent: None,
        }
    }

    /// The family parameter that a sweep drives to infinity.
    pub fn parameter(&self) -> f64 {
        match self.kind {
            FamilyKind::Polyharmonic => self.k as f64,
            FamilyKind::Gaussian | FamilyKind::MultiquadricVaryAlpha => self.alpha,
            FamilyKind::MultiquadricVaryC => self.c,
        }
    }

    pub fn with_parameter(&self, value: f64) -> Result<Self, FamilyError> {
        let mut out = *self;
        match self.kind {
            FamilyKind::Polyharmonic => {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(FamilyError::InvalidSpec(format!(
                        "polyharmonic order must be a positive integer, got {value}"
                    )));
                }
                out.k = value as u32;
            }
            FamilyKind::Gaussian | FamilyKind::MultiquadricVaryAlpha => out.alpha = value,
            FamilyKind::MultiquadricVaryC => out.c = value,
        }
        out.validate()?;
        Ok(out)
    }

    /// `φ̂` blows up at the origin.
    pub fn is_singular_at_origin(&self) -> bool {
        match self.kind {
            FamilyKind::Polyharmonic => true,
            FamilyKind::Gaussian => false,
            FamilyKind::MultiquadricVaryAlpha | FamilyKind::MultiquadricVaryC => {
                self.alpha + 0.5 * self.dim as f64 > 0.0
            }
        }
    }

    /// Exponent `n + ε` of the algebraic decay bound.
    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent.unwrap_or(match self.kind {
            FamilyKind::Polyharmonic => 2.0 * self.k as f64,
            _ => self.dim as f64 + 1.0,
        })
    }

    fn has_algebraic_tail(&self) -> bool {
        self.kind == FamilyKind::Polyharmonic
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        let n = self.dim;
        if n == 0 {
            return Err(FamilyError::InvalidSpec("dimension must be positive".into()));
        }
        let invalid = |msg: String| Err(FamilyError::InvalidSpec(msg));
        match self.kind {
            FamilyKind::Polyharmonic => {
                if self.k == 0 {
                    return invalid("polyharmonic order k must be at least 1".into());
                }
                if n > 1 && (self.k as usize) < n + 1 {
                    return invalid(format!(
                        "polyharmonic order k={} too small for dimension {n}; need k >= {}",
                        self.k,
                        n + 1
                    ));
                }
            }
            FamilyKind::Gaussian => {
                if !(self.alpha >= 1.0 && self.alpha.is_finite()) {
                    return invalid(format!("gaussian scale must be >= 1, got {}", self.alpha));
                }
            }
            FamilyKind::MultiquadricVaryAlpha => {
                if !(self.alpha >= 0.5 && self.alpha.is_finite()) {
                    return invalid(format!(
                        "multiquadric exponent must be >= 1/2, got {}",
                        self.alpha
                    ));
                }
                if is_positive_integer(self.alpha) {
                    return invalid(format!(
                        "multiquadric exponent must not be a positive integer, got {}",
                        self.alpha
                    ));
                }
                if !(self.c > 0.0 && self.c.is_finite()) {
                    return invalid(format!("multiquadric shape must be positive, got {}", self.c));
                }
            }
            FamilyKind::MultiquadricVaryC => {
                if !(self.c >= 1.0 && self.c.is_finite()) {
                    return invalid(format!("multiquadric shape must be >= 1, got {}", self.c));
                }
                let lower = -(2.0 * n as f64 + 1.0) / 2.0;
                let in_set = (self.alpha <= lower || self.alpha >= 0.5) && self.alpha.is_finite();
                if !in_set || is_positive_integer(self.alpha) {
                    return invalid(format!(
                        "multiquadric exponent {} outside (-inf, {lower}] U [1/2, inf) minus the positive integers",
                        self.alpha
                    ));
                }
            }
        }
        if 0.5 * n as f64 + self.alpha.abs() > specfun::MAX_ORDER
            && matches!(
                self.kind,
                FamilyKind::MultiquadricVaryAlpha | FamilyKind::MultiquadricVaryC
            )
        {
            return invalid(format!(
                "Bessel order n/2 + alpha exceeds the supported {}",
                specfun::MAX_ORDER
            ));
        }
        if self.decay_exponent() <= n as f64 {
            return invalid(format!(
                "decay exponent {} must exceed the dimension {n}",
                self.decay_exponent()
            ));
        }
        Ok(())
    }

    /// Short description used in CSV headers, e.g. `gaussian dim=1 alpha=4`.
    pub fn describe(&self) -> String {
        match self.kind {
            FamilyKind::Polyharmonic => format!("polyharmonic dim={} k={}", self.dim, self.k),
            FamilyKind::Gaussian => format!("gaussian dim={} alpha={}", self.dim, self.alpha),
            FamilyKind::MultiquadricVaryAlpha | FamilyKind::MultiquadricVaryC => format!(
                "{} dim={} alpha={} c={}",
                self.kind.name(),
                self.dim,
                self.alpha,
                self.c
            ),
        }
    }

    /// Default lattice truncation: the nominal per-family value, raised until
    /// the unresolved tail at the base-cell corner is below a target.
    pub fn default_trunc_j(&self) -> Result<u32, FamilyError> {
        self.validate()?;
        let n = self.dim as f64;
        let nominal = match self.kind {
            FamilyKind::Polyharmonic => 16,
            FamilyKind::Gaussian => 4,
            _ => (((self.alpha * n + 40.0) / TWO_PI).ceil() as i64).max(2) as u32,
        };
        let target = if self.has_algebraic_tail() && self.dim > 1 {
            1e-7
        } else {
            1e-12
        };
        let corner = vec![PI; self.dim];
        let lphi = self.log_phi_hat_unchecked(&corner)?;
        let mut j = nominal;
        while j < 512 {
            let p = lattice_ratio_sum_with(self, &corner, j, &TailMajorant::new(self, j)?, lphi)?;
            if p.residual_bound <= target * (1.0 + p.value()) {
                break;
            }
            j = (j * 5).div_ceil(4);
        }
        Ok(j)
    }

    pub(crate) fn log_phi_hat_radial(&self, r: f64) -> Result<f64, FamilyError> {
        match self.kind {
            FamilyKind::Polyharmonic => {
                if r == 0.0 {
                    return Err(FamilyError::Domain(
                        "polyharmonic transform is singular at the origin".into(),
                    ));
                }
                Ok(-2.0 * self.k as f64 * r.ln())
            }
            FamilyKind::Gaussian => Ok(-self.alpha * r * r),
            FamilyKind::MultiquadricVaryAlpha | FamilyKind::MultiquadricVaryC => {
                let order = 0.5 * self.dim as f64 + self.alpha;
                if r == 0.0 {
                    if order < 0.0 {
                        // z^{|ν|} K_{|ν|}(z) -> Γ(|ν|) 2^{|ν|-1} as z -> 0.
                        let nu = -order;
                        return Ok(-2.0 * nu * self.c.ln()
                            + ln_gamma(nu)
                            + (nu - 1.0) * std::f64::consts::LN_2);
                    }
                    return Err(FamilyError::Domain(
                        "multiquadric transform is singular at the origin for alpha > -n/2".into(),
                    ));
                }
                let cfg = BesselEvalConfig::default();
                let z = self.c * r;
                Ok(-order * (r / self.c).ln() + specfun::log_bessel_k(order, z, &cfg)?)
            }
        }
    }

    fn log_phi_hat_unchecked(&self, xi: &[f64]) -> Result<f64, FamilyError> {
        self.log_phi_hat_radial(lattice::euclidean_norm(xi))
    }

    fn check_point(&self, xi: &[f64]) -> Result<(), FamilyError> {
        if xi.len() != self.dim {
            return Err(FamilyError::Domain(format!(
                "point has dimension {} but the family has dimension {}",
                xi.len(),
                self.dim
            )));
        }
        if xi.iter().any(|v| !v.is_finite()) {
            return Err(FamilyError::Domain("point has non-finite coordinates".into()));
        }
        Ok(())
    }
}

fn is_positive_integer(x: f64) -> bool {
    x >= 1.0 && (x - x.round()).abs() < 1e-12
}

/// `ln φ̂(ξ)`, underflow-safe.
pub fn log_phi_hat(spec: &FamilySpec, xi: &[f64]) -> Result<f64, FamilyError> {
    spec.validate()?;
    spec.check_point(xi)?;
    spec.log_phi_hat_unchecked(xi)
}

/// The constant-normalized transform `φ̂(ξ) > 0`.
pub fn phi_hat(spec: &FamilySpec, xi: &[f64]) -> Result<f64, FamilyError> {
    let lv = log_phi_hat(spec, xi)?;
    let v = lv.exp();
    if !v.is_finite() || v == 0.0 {
        return Err(FamilyError::Domain(format!(
            "phi_hat at {xi:?} is not representable (log value {lv})"
        )));
    }
    Ok(v)
}

/// `M_j(ξ) = φ̂(ξ + 2πj) / φ̂(ξ)`, assembled from log values.
pub fn m_ratio(spec: &FamilySpec, j: &[i64], xi: &[f64]) -> Result<f64, FamilyError> {
    spec.validate()?;
    spec.check_point(xi)?;
    if j.len() != spec.dim {
        return Err(FamilyError::Domain("lattice vector has the wrong dimension".into()));
    }
    if j.iter().all(|&c| c == 0) {
        return Err(FamilyError::Domain("m_ratio needs a nonzero lattice vector".into()));
    }
    let base = spec.log_phi_hat_unchecked(xi)?;
    shifted_ratio(spec, j, xi, base)
}

pub(crate) fn shifted_ratio(
    spec: &FamilySpec,
    j: &[i64],
    xi: &[f64],
    log_base: f64,
) -> Result<f64, FamilyError> {
    let r2: f64 = xi
        .iter()
        .zip(j)
        .map(|(x, &m)| {
            let t = x + TWO_PI * m as f64;
            t * t
        })
        .sum();
    let shifted = spec.log_phi_hat_radial(r2.sqrt())?;
    Ok((shifted - log_base).exp())
}

/// Lattice sum `u(ξ) = Σ_{j≠0} φ̂(ξ − 2πj)` split into what was summed
/// explicitly and what was estimated or bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Periodization {
    /// `Σ_{0<‖j‖_∞≤J} φ̂(ξ − 2πj)`.
    pub partial_sum: f64,
    /// Asymptotic estimate of the discarded tail (Euler–Maclaurin for the
    /// one-dimensional algebraic family, zero otherwise).
    pub tail_estimate: f64,
    /// Analytic overestimate of the discarded tail `Σ_{‖j‖_∞>J}`.
    pub tail_bound: f64,
    /// Bound on `|u(ξ) − partial_sum − tail_estimate|`.
    pub residual_bound: f64,
}

impl Periodization {
    pub fn value(&self) -> f64 {
        self.partial_sum + self.tail_estimate
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            partial_sum: self.partial_sum * s,
            tail_estimate: self.tail_estimate * s,
            tail_bound: self.tail_bound * s,
            residual_bound: self.residual_bound * s,
        }
    }
}

/// `ln Σ_{s>J} #shell(s) · φ̂_rad(2πs − π)`, an upper bound for the lattice tail
/// at every point of the base cell once divided by nothing, since every
/// point of shell `s` lies at distance at least `2πs − π` from the origin.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TailMajorant {
    pub log_sum: f64,
}

impl TailMajorant {
    pub fn new(spec: &FamilySpec, trunc_j: u32) -> Result<Self, FamilyError> {
        let n = spec.dim;
        let mut acc = LogSum::default();
        let extra = 256u64;
        let mut prev = f64::NEG_INFINITY;
        let mut s = trunc_j as u64 + 1;
        loop {
            let term = shell_count_ln(n, s) + spec.log_phi_hat_radial(TWO_PI * s as f64 - PI)?;
            acc.add(term);
            if spec.has_algebraic_tail() {
                if s >= trunc_j as u64 + extra {
                    // (2s+1) ≤ 3s and 2πs − π ≥ πs for the rest of the shells.
                    let p = spec.decay_exponent();
                    let big_s = s as f64;
                    let rem = (2.0 * n as f64).ln() + (n as f64 - 1.0) * 3f64.ln() - p * PI.ln()
                        + (n as f64 - p) * big_s.ln()
                        - (p - n as f64).ln();
                    acc.add(rem);
                    break;
                }
            } else if term < acc.value() - 80.0 && term < prev {
                // Consecutive shell ratios are decreasing here, so a geometric
                // series with the current ratio dominates the rest.
                let q = (term - prev).exp();
                if q < 1.0 {
                    acc.add(term + (q / (1.0 - q)).ln());
                    break;
                }
            }
            if term == f64::NEG_INFINITY {
                break;
            }
            prev = term;
            s += 1;
            if s > trunc_j as u64 + 100_000 {
                break;
            }
        }
        Ok(Self {
            log_sum: acc.value(),
        })
    }
}

fn shell_count_ln(dim: usize, s: u64) -> f64 {
    lattice::shell_count(dim, s).ln()
}

#[derive(Debug, Default, Clone, Copy)]
struct LogSum {
    max: Option<f64>,
    scaled: f64,
}

impl LogSum {
    fn add(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            return;
        }
        match self.max {
            None => {
                self.max = Some(term);
                self.scaled = 1.0;
            }
            Some(m) if term > m => {
                self.scaled = self.scaled * (m - term).exp() + 1.0;
                self.max = Some(term);
            }
            Some(m) => self.scaled += (term - m).exp(),
        }
    }

    fn value(&self) -> f64 {
        match self.max {
            None => f64::NEG_INFINITY,
            Some(m) => m + self.scaled.ln(),
        }
    }
}

const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];
/// ζ(12)
const ZETA_12: f64 = 1.000_246_086_553_308;

/// Euler–Maclaurin estimate of `Σ_{m>J} (2πm + σ)^{−p}` and a bound on its
/// remainder.
fn euler_maclaurin_tail(p: f64, sigma: f64, trunc_j: u32) -> (f64, f64) {
    let y = TWO_PI * trunc_j as f64 + sigma;
    let mut estimate = y.powf(1.0 - p) / (TWO_PI * (p - 1.0)) - 0.5 * y.powf(-p);
    // f^{(r)}(J) = (−1)^r (p)_r (2π)^r y^{−p−r}
    let deriv = |r: u32| {
        let mut poch = 1.0;
        for i in 0..r {
            poch *= p + i as f64;
        }
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        sign * poch * TWO_PI.powi(r as i32) * y.powf(-p - r as f64)
    };
    let mut factorial = 1.0;
    for (q, b) in BERNOULLI.iter().enumerate() {
        let two_q = 2 * (q as u32 + 1);
        factorial *= (two_q - 1) as f64 * two_q as f64;
        estimate -= b / factorial * deriv(two_q - 1);
    }
    let q_max = 2 * BERNOULLI.len() as u32;
    let remainder = 2.0 * ZETA_12 / TWO_PI.powi(q_max as i32) * deriv(q_max - 1).abs();
    (estimate, remainder)
}

/// Lattice sum in units of `φ̂(ξ)`, i.e. `Σ_{j≠0} M_j(ξ)`.
pub(crate) fn lattice_ratio_sum_with(
    spec: &FamilySpec,
    xi: &[f64],
    trunc_j: u32,
    majorant: &TailMajorant,
    log_base: f64,
) -> Result<Periodization, FamilyError> {
    let mut partial = 0.0;
    for j in lattice::punctured_cube_points(spec.dim, trunc_j as i64) {
        partial += shifted_ratio(spec, &j, xi, log_base)?;
    }
    Ok(finish_ratio_sum(spec, xi, trunc_j, majorant, log_base, partial))
}

pub(crate) fn finish_ratio_sum(
    spec: &FamilySpec,
    xi: &[f64],
    trunc_j: u32,
    majorant: &TailMajorant,
    log_base: f64,
    partial: f64,
) -> Periodization {
    let tail_bound = (majorant.log_sum - log_base).exp();
    if spec.has_algebraic_tail() && spec.dim == 1 {
        let p = spec.decay_exponent();
        let x = xi[0];
        let (e1, r1) = euler_maclaurin_tail(p, -x, trunc_j);
        let (e2, r2) = euler_maclaurin_tail(p, x, trunc_j);
        let scale = (-log_base).exp();
        Periodization {
            partial_sum: partial,
            tail_estimate: (e1 + e2) * scale,
            tail_bound,
            residual_bound: (r1 + r2) * scale,
        }
    } else {
        Periodization {
            partial_sum: partial,
            tail_estimate: 0.0,
            tail_bound,
            residual_bound: tail_bound,
        }
    }
}

fn check_base_cell(xi: &[f64]) -> Result<(), FamilyError> {
    if xi.iter().any(|v| v.abs() > PI * (1.0 + 1e-12)) {
        return Err(FamilyError::Domain(format!(
            "point {xi:?} lies outside the base cell [-pi, pi]^n"
        )));
    }
    Ok(())
}

/// `Σ_{j≠0} M_j(ξ)` with truncation bookkeeping, in units of `φ̂(ξ)`.
pub fn periodization_ratio(
    spec: &FamilySpec,
    xi: &[f64],
    trunc_j: u32,
) -> Result<Periodization, FamilyError> {
    spec.validate()?;
    spec.check_point(xi)?;
    check_base_cell(xi)?;
    if trunc_j == 0 {
        return Err(FamilyError::Domain("truncation J must be at least 1".into()));
    }
    let log_base = spec.log_phi_hat_unchecked(xi)?;
    let majorant = TailMajorant::new(spec, trunc_j)?;
    let p = lattice_ratio_sum_with(spec, xi, trunc_j, &majorant, log_base)?;
    if p.residual_bound > PERIODIZATION_REL_TOL * (1.0 + p.value()) {
        let mut required = trunc_j;
        while required < 1 << 16 {
            required *= 2;
            let m = TailMajorant::new(spec, required)?;
            let q = finish_ratio_sum(spec, xi, required, &m, log_base, p.partial_sum);
            if q.residual_bound <= PERIODIZATION_REL_TOL * (1.0 + p.value()) {
                break;
            }
        }
        return Err(FamilyError::Truncation {
            trunc_j,
            required_j: required,
            residual: p.residual_bound / (1.0 + p.value()),
            value: 1.0 + p.value(),
        });
    }
    Ok(p)
}

/// `u(ξ) = Σ_{j≠0} φ̂(ξ − 2πj)` for `ξ` in the base cell.
pub fn periodization(
    spec: &FamilySpec,
    xi: &[f64],
    trunc_j: u32,
) -> Result<Periodization, FamilyError> {
    let ratio = periodization_ratio(spec, xi, trunc_j)?;
    let base = phi_hat(spec, xi)?;
    let out = ratio.scaled(base);
    if !out.value().is_finite() {
        return Err(FamilyError::Domain(format!(
            "periodization at {xi:?} is not representable; use periodization_ratio"
        )));
    }
    Ok(out)
}

/// Per-lattice-vector maxima of `M_{j,·}` across a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub j: Vec<i64>,
    /// One entry per swept parameter.
    pub max_ratio: Vec<f64>,
    pub nonincreasing: bool,
}

/// Summable domination of the ratios, witnessed by a finite sum plus tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dominator {
    /// `M_j = max_param max_ξ M_{j,param}(ξ)` for each listed `j`.
    pub envelope: Vec<f64>,
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub kind: FamilyKind,
    pub dim: usize,
    pub family_params: Vec<f64>,
    pub grid_points_per_axis: usize,
    pub jmax: u32,
    /// Minimum of `φ̂` over the base-cell grid, per parameter.
    pub h2_delta: Vec<f64>,
    /// Least-squares slope of `ln φ̂` against `ln ‖ξ‖` on `[10π, 100π]`.
    pub h4_fit: Vec<f64>,
    /// Max over the grid of `Σ_{j≠0} M_{j,param}(ξ)`, per parameter.
    pub r1_max_ratio: Vec<f64>,
    pub per_j: Vec<RatioRow>,
    pub r2_dominator: Dominator,
    pub r1_nonincreasing: bool,
    pub r2_summable: bool,
    pub violations: Vec<String>,
}

/// Closed grid of `m` points per axis over `[−π, π]^n`.
pub fn closed_base_grid(dim: usize, m: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..m)
        .map(|i| {
            if m == 1 {
                0.0
            } else {
                -PI + TWO_PI * i as f64 / (m - 1) as f64
            }
        })
        .collect();
    let mut out = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * m);
        for p in &out {
            for &a in &axis {
                let mut q = p.clone();
                q.push(a);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn decay_slope(spec: &FamilySpec, r_lo: f64, r_hi: f64) -> Result<f64, FamilyError> {
    let count = 32;
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for i in 0..count {
        let t = i as f64 / (count - 1) as f64;
        let r = (r_lo.ln() + t * (r_hi / r_lo).ln()).exp();
        xs.push(r.ln());
        ys.push(spec.log_phi_hat_radial(r)?);
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Fitted decay slope of `ln φ̂` over `‖ξ‖ ∈ [r_lo, r_hi]`.
pub fn fitted_decay_slope(spec: &FamilySpec, r_lo: f64, r_hi: f64) -> Result<f64, FamilyError> {
    spec.validate()?;
    decay_slope(spec, r_lo, r_hi)
}

/// Hypothesis and regularity diagnostics for a parameter sweep.
///
/// Non-monotone ratio sequences are reported in `violations`; they do not
/// make the call fail.
pub fn regularity_report(
    specs: &[FamilySpec],
    grid_points_per_axis: usize,
    jmax: u32,
) -> Result<RegularityReport, FamilyError> {
    let first = specs
        .first()
        .ok_or_else(|| FamilyError::InvalidSpec("empty parameter sweep".into()))?;
    for s in specs {
        s.validate()?;
        if s.kind != first.kind || s.dim != first.dim {
            return Err(FamilyError::InvalidSpec(
                "all specs in a sweep must share kind and dimension".into(),
            ));
        }
    }
    let params: Vec<f64> = specs.iter().map(|s| s.parameter()).collect();
    if params.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FamilyError::InvalidSpec(
            "sweep parameters must be strictly increasing".into(),
        ));
    }
    if grid_points_per_axis < 2 || jmax == 0 {
        return Err(FamilyError::InvalidSpec(
            "need at least 2 grid points per axis and jmax >= 1".into(),
        ));
    }
    let dim = first.dim;
    let grid = closed_base_grid(dim, grid_points_per_axis);
    let js = lattice::punctured_cube_points(dim, jmax as i64);

    let mut h2_delta = Vec::new();
    let mut h4_fit = Vec::new();
    let mut r1_max_ratio = Vec::new();
    let mut per_j_max = vec![vec![0.0; specs.len()]; js.len()];
    let mut violations = Vec::new();

    for (pi, spec) in specs.iter().enumerate() {
        let trunc = spec.default_trunc_j()?.max(jmax);
        let majorant = TailMajorant::new(spec, trunc)?;
        let mut min_phi = f64::INFINITY;
        let mut max_sum: f64 = 0.0;
        for xi in &grid {
            let r = lattice::euclidean_norm(xi);
            if r == 0.0 && spec.is_singular_at_origin() {
                continue;
            }
            let lb = spec.log_phi_hat_radial(r)?;
            min_phi = min_phi.min(lb.exp());
            let p = lattice_ratio_sum_with(spec, xi, trunc, &majorant, lb)?;
            max_sum = max_sum.max(p.value());
            for (ji, j) in js.iter().enumerate() {
                let m = shifted_ratio(spec, j, xi, lb)?;
                if m > per_j_max[ji][pi] {
                    per_j_max[ji][pi] = m;
                }
            }
        }
        if !(min_phi > 0.0) {
            violations.push(format!("positivity fails for parameter {}: min phi_hat = {min_phi:e}", params[pi]));
        }
        h2_delta.push(min_phi);
        let slope = decay_slope(spec, 10.0 * PI, 100.0 * PI)?;
        if slope > -(dim as f64) {
            violations.push(format!(
                "decay fit slope {slope} for parameter {} does not beat -n",
                params[pi]
            ));
        }
        h4_fit.push(slope);
        r1_max_ratio.push(max_sum);
    }

    let mut per_j = Vec::with_capacity(js.len());
    let mut r1_nonincreasing = true;
    for (j, maxima) in js.iter().zip(per_j_max) {
        let ok = maxima.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        if !ok {
            r1_nonincreasing = false;
            violations.push(format!("ratio maxima for j={j:?} increase along the sweep: {maxima:?}"));
        }
        per_j.push(RatioRow {
            j: j.clone(),
            max_ratio: maxima,
            nonincreasing: ok,
        });
    }

    let envelope: Vec<f64> = per_j
        .iter()
        .map(|row| row.max_ratio.iter().cloned().fold(0.0, f64::max))
        .collect();
    let partial_sum: f64 = envelope.iter().sum();
    // Beyond jmax: every ratio is at most φ̂(2πs − π) / φ̂(corner).
    let corner = vec![PI; dim];
    let mut tail_bound: f64 = 0.0;
    for spec in specs {
        let m = TailMajorant::new(spec, jmax)?;
        let lc = spec.log_phi_hat_unchecked(&corner)?;
        tail_bound = tail_bound.max((m.log_sum - lc).exp());
    }
    let total = partial_sum + tail_bound;
    let r2_summable = total.is_finite();
    if !r2_summable {
        violations.push("dominating sequence is not summable".into());
    }

    Ok(RegularityReport {
        kind: first.kind,
        dim,
        family_params: params,
        grid_points_per_axis,
        jmax,
        h2_delta,
        h4_fit,
        r1_max_ratio,
        per_j,
        r2_dominator: Dominator {
            envelope,
            partial_sum,
            tail_bound,
            total,
        },
        r1_nonincreasing,
        r2_summable,
        violations,
    })
}
