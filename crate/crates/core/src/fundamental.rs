//! Sampled transform of the fundamental function and its inverse.
//!
//! The transform is stored in normalized form `Λ = (2π)^{n/2} L̂ ∈ [0, 1]` on a
//! tensor grid covering `[−(2J+1)π, (2J+1)π]^n`. On the base cell it is
//! computed as `1 / (1 + Σ_{j≠0} M_j(ξ))`; shifted cells reuse the periodic
//! denominator as `Λ(ξ + 2πm) = M_m(ξ) Λ(ξ)`.
//!
//! `L(x) = (2π)^{−n} ∫ Λ(ξ) cos(x·ξ) dξ` is evaluated with the composite
//! trapezoid rule. Since `Λ` is even in every coordinate, the cosine of the
//! inner product can be replaced by a product of per-axis cosines, which turns
//! the grid sum into a cheap tensor contraction.
//!
//! For one-dimensional polyharmonic splines the algebraic tail of `Λ` is too
//! heavy for a truncated trapezoid, so `eval_L` instead uses the factorization
//! `Λ = B̂ R` with `B̂` the transform of the centered cardinal B-spline of order
//! `2k` and `R` a periodic analytic function; then `L = Σ_ℓ r_ℓ M_{2k}(· − ℓ)`
//! with `r_ℓ` the Fourier coefficients of `R`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{self, FamilyError, FamilyKind, FamilySpec, TailMajorant};
use crate::lattice;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FundamentalError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Uniform tensor grid over `[−(2J+1)π, (2J+1)π]^n` with step `2π/M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub dim: usize,
    pub cells_j: u32,
    pub points_per_cell: u32,
    /// Shift every node by half a step so that `ξ = 0` is never a node.
    #[serde(default = "default_offset")]
    pub offset: bool,
}

fn default_offset() -> bool {
    true
}

impl FrequencyGrid {
    pub fn new(
        dim: usize,
        cells_j: u32,
        points_per_cell: u32,
        offset: bool,
    ) -> Result<Self, FundamentalError> {
        let g = Self {
            dim,
            cells_j,
            points_per_cell,
            offset,
        };
        g.validate()?;
        Ok(g)
    }

    /// `J = 8, M = 256` in one dimension, `J = 4, M = 64` in two, smaller above.
    pub fn default_for(dim: usize) -> Self {
        let (cells_j, points_per_cell) = match dim {
            1 => (8, 256),
            2 => (4, 64),
            _ => (2, 16),
        };
        Self {
            dim,
            cells_j,
            points_per_cell,
            offset: true,
        }
    }

    pub fn validate(&self) -> Result<(), FundamentalError> {
        if self.dim == 0 {
            return Err(FundamentalError::InvalidGrid("dimension must be positive".into()));
        }
        if self.cells_j == 0 {
            return Err(FundamentalError::InvalidGrid("cells_J must be at least 1".into()));
        }
        if self.points_per_cell < 2 || self.points_per_cell % 2 != 0 {
            return Err(FundamentalError::InvalidGrid(format!(
                "points_per_cell must be even and >= 2, got {}",
                self.points_per_cell
            )));
        }
        let total = (self.axis_len() as f64).powi(self.dim as i32);
        if total > 5e7 {
            return Err(FundamentalError::InvalidGrid(format!(
                "grid has {total:e} points, more than the supported 5e7"
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        TWO_PI / self.points_per_cell as f64
    }

    /// Points per axis over the whole grid.
    pub fn axis_len(&self) -> usize {
        (2 * self.cells_j as usize + 1) * self.points_per_cell as usize
    }

    fn shift(&self) -> f64 {
        if self.offset {
            0.5
        } else {
            0.0
        }
    }

    /// Node positions in units of the step: `(i + offset − N/2)` along the
    /// full axis. Exact in floating point, so nodes are exactly symmetric.
    fn full_units(&self) -> Vec<f64> {
        let n = self.axis_len();
        let half = n as f64 / 2.0;
        (0..n).map(|f| f as f64 + self.shift() - half).collect()
    }

    fn base_units(&self) -> Vec<f64> {
        let m = self.points_per_cell as usize;
        let half = m as f64 / 2.0;
        (0..m).map(|i| i as f64 + self.shift() - half).collect()
    }

    /// Full-axis node coordinates.
    pub fn axis(&self) -> Vec<f64> {
        let h = self.step();
        self.full_units().into_iter().map(|u| u * h).collect()
    }

    /// Base-cell node coordinates along one axis.
    pub fn base_axis(&self) -> Vec<f64> {
        let h = self.step();
        self.base_units().into_iter().map(|u| u * h).collect()
    }

    /// Largest `‖x‖_∞` at which `eval_L` is trusted. The trapezoid sum is
    /// periodic in `x` with period `M`, so this keeps aliases far away.
    pub fn x_max(&self) -> f64 {
        3.0 * self.points_per_cell as f64 / 8.0
    }
}

/// Fourier coefficients of `R = Λ / B̂` for the one-dimensional polyharmonic
/// family.
#[derive(Debug, Clone, PartialEq)]
struct SplineSeries {
    k: u32,
    /// `r_0, r_1, …`; the sequence is even.
    coeffs: Vec<f64>,
}

/// Sampled `L̂` with the metadata needed to invert it.
#[derive(Debug, Clone)]
pub struct FundamentalFunction {
    pub grid: FrequencyGrid,
    pub family: FamilySpec,
    /// Lattice-sum truncation used for the base-cell denominator.
    pub trunc_j: u32,
    /// `Λ` over the full grid, row-major with the last axis fastest.
    values: Vec<f64>,
    /// `ln(φ̂ + u)` on the base cell, i.e. `−ln P`. Kept in log form because
    /// `P` itself over- or underflows for strongly decaying families.
    log_denominator: Vec<f64>,
    /// Mean over the base cell of `1 − Σ_{stored m} Λ(ξ + 2πm)`, which bounds
    /// the contribution of the part of `Λ` beyond the grid.
    pub tail_bound: f64,
    spline: Option<SplineSeries>,
}

struct BasePoint {
    lambda: f64,
    log_denominator: f64,
    /// `M_m(ξ)` for every stored cell `m`, in cube order (`m = 0` holds 1).
    ratios: Vec<f64>,
}

/// Builds `L̂` for `spec` on `grid`.
pub fn build_lhat(
    spec: &FamilySpec,
    grid: &FrequencyGrid,
) -> Result<FundamentalFunction, FundamentalError> {
    build_with_log_scale(spec, grid, 0.0)
}

/// Same as `build_lhat` with `φ̂` multiplied by `e^{log_scale}`.
pub(crate) fn build_with_log_scale(
    spec: &FamilySpec,
    grid: &FrequencyGrid,
    log_scale: f64,
) -> Result<FundamentalFunction, FundamentalError> {
    spec.validate()?;
    grid.validate()?;
    if grid.dim != spec.dim {
        return Err(FundamentalError::InvalidGrid(format!(
            "grid dimension {} does not match family dimension {}",
            grid.dim, spec.dim
        )));
    }
    let n = spec.dim;
    let m = grid.points_per_cell as usize;
    let cells = grid.cells_j as i64;
    let trunc_j = spec.default_trunc_j()?.max(grid.cells_j);
    let majorant = TailMajorant::new(spec, trunc_j)?;
    let h = grid.step();
    let base_units = grid.base_units();
    let mm = m as f64;

    let sum_points = lattice::cube_points(n, trunc_j as i64);
    let stored_cells = lattice::cube_points(n, cells);
    let stored_in_sum: Vec<usize> = stored_cells
        .iter()
        .map(|c| lattice::cube_index(c, trunc_j as i64).expect("stored cells lie inside the sum"))
        .collect();
    // Pair j with −j so that the sum at −ξ adds the same numbers.
    let half: Vec<(usize, usize)> = sum_points
        .iter()
        .enumerate()
        .filter(|(_, j)| j.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
        .map(|(i, j)| {
            let neg: Vec<i64> = j.iter().map(|c| -c).collect();
            (i, lattice::cube_index(&neg, trunc_j as i64).unwrap())
        })
        .collect();

    let base_multi = lattice_points_unsigned(n, m);
    let singular = spec.is_singular_at_origin();

    let points: Vec<BasePoint> = base_multi
        .par_iter()
        .map(|idx| -> Result<BasePoint, FundamentalError> {
            let units: Vec<f64> = idx.iter().map(|&i| base_units[i]).collect();
            let xi: Vec<f64> = units.iter().map(|u| u * h).collect();
            let r = lattice::euclidean_norm(&xi);
            if r == 0.0 && singular {
                let mut ratios = vec![0.0; stored_cells.len()];
                ratios[stored_cells.len() / 2] = 1.0;
                return Ok(BasePoint {
                    lambda: 1.0,
                    log_denominator: f64::INFINITY,
                    ratios,
                });
            }
            let log_base = spec.log_phi_hat_radial(r)? + log_scale;
            let mut ratio = vec![0.0; sum_points.len()];
            for (slot, j) in ratio.iter_mut().zip(&sum_points) {
                if j.iter().all(|&c| c == 0) {
                    *slot = 1.0;
                    continue;
                }
                let r2: f64 = units
                    .iter()
                    .zip(j)
                    .map(|(u, &c)| {
                        let t = (u + c as f64 * mm) * h;
                        t * t
                    })
                    .sum();
                *slot = (spec.log_phi_hat_radial(r2.sqrt())? + log_scale - log_base).exp();
            }
            let partial: f64 = half.iter().map(|&(a, b)| ratio[a] + ratio[b]).sum();
            let p = families::finish_ratio_sum(spec, &xi, trunc_j, &majorant, log_base - log_scale, partial);
            let total = p.value();
            if p.residual_bound > families::PERIODIZATION_REL_TOL * (1.0 + total) {
                return Err(FamilyError::Truncation {
                    trunc_j,
                    required_j: trunc_j * 2,
                    residual: p.residual_bound / (1.0 + total),
                    value: 1.0 + total,
                }
                .into());
            }
            let lambda = 1.0 / (1.0 + total);
            Ok(BasePoint {
                lambda,
                log_denominator: log_base + (1.0 + total).ln(),
                ratios: stored_in_sum.iter().map(|&i| ratio[i]).collect(),
            })
        })
        .collect::<Result<_, _>>()?;

    let axis_len = grid.axis_len();
    let total_points = axis_len.pow(n as u32);
    let mut values = vec![0.0; total_points];
    let mut log_denominator = Vec::with_capacity(points.len());
    let mut tail_sum = 0.0;
    for (idx, bp) in base_multi.iter().zip(&points) {
        log_denominator.push(bp.log_denominator);
        let mut stored = 0.0;
        for (cell, &ratio) in stored_cells.iter().zip(&bp.ratios) {
            let v = if cell.iter().all(|&c| c == 0) {
                bp.lambda
            } else {
                ratio * bp.lambda
            };
            stored += v;
            let mut flat = 0usize;
            for (a, &i) in idx.iter().enumerate() {
                let f = (cell[a] + cells) as usize * m + i;
                flat = flat * axis_len + f;
            }
            values[flat] = v;
        }
        tail_sum += (1.0 - stored).max(0.0);
    }
    let tail_bound = tail_sum / points.len() as f64;

    let spline = if spec.kind == FamilyKind::Polyharmonic && n == 1 {
        Some(spline_series(spec, trunc_j, &majorant)?)
    } else {
        None
    };

    Ok(FundamentalFunction {
        grid: *grid,
        family: *spec,
        trunc_j,
        values,
        log_denominator,
        tail_bound,
        spline,
    })
}

/// All multi-indices in `[0, m)^n`, last axis fastest.
fn lattice_points_unsigned(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * m);
        for p in &out {
            for i in 0..m {
                let mut q = p.clone();
                q.push(i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// `Λ(ξ)` on the base interval from the ratio form, one dimension.
fn lambda_1d(spec: &FamilySpec, xi: f64, trunc_j: u32, majorant: &TailMajorant) -> Result<f64, FamilyError> {
    let log_base = spec.log_phi_hat_radial(xi.abs())?;
    let mut partial = 0.0;
    for j in 1..=trunc_j as i64 {
        let a = (spec.log_phi_hat_radial((xi + TWO_PI * j as f64).abs())? - log_base).exp();
        let b = (spec.log_phi_hat_radial((xi - TWO_PI * j as f64).abs())? - log_base).exp();
        partial += a + b;
    }
    let p = families::finish_ratio_sum(spec, &[xi], trunc_j, majorant, log_base, partial);
    Ok(1.0 / (1.0 + p.value()))
}

fn spline_series(
    spec: &FamilySpec,
    trunc_j: u32,
    majorant: &TailMajorant,
) -> Result<SplineSeries, FamilyError> {
    let k = spec.k;
    let r_at = |xi: f64| -> Result<f64, FamilyError> {
        let half = 0.5 * xi;
        Ok(lambda_1d(spec, xi, trunc_j, majorant)? * (half / half.sin()).powi(2 * k as i32))
    };
    let coeffs_for = |nodes: usize| -> Result<(Vec<f64>, f64), FamilyError> {
        let h = TWO_PI / nodes as f64;
        let half = nodes as f64 / 2.0;
        // R is even, so the positive half of the offset nodes suffices.
        let xs: Vec<f64> = (nodes / 2..nodes).map(|i| (i as f64 + 0.5 - half) * h).collect();
        let rs: Vec<f64> = xs.iter().map(|&x| r_at(x)).collect::<Result<_, _>>()?;
        let peak = rs.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let coeffs = (0..nodes / 2)
            .map(|l| {
                let s: f64 = xs.iter().zip(&rs).map(|(x, r)| r * (l as f64 * x).cos()).sum();
                2.0 * s / nodes as f64
            })
            .collect();
        Ok((coeffs, peak))
    };
    // Aliasing puts r_{N−ℓ} on top of r_ℓ, so once the upper half of the
    // computed coefficients is at rounding level the lower half is exact.
    let mut nodes = 256usize;
    let (mut coeffs, mut peak) = coeffs_for(nodes)?;
    while nodes < 1 << 14 {
        let top = coeffs[nodes / 4..]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        if top <= 64.0 * f64::EPSILON * peak {
            break;
        }
        nodes *= 2;
        (coeffs, peak) = coeffs_for(nodes)?;
    }
    coeffs.truncate(nodes / 4);
    let scale = coeffs[0].abs();
    let keep = coeffs
        .iter()
        .rposition(|c| c.abs() > 1e-18 * scale)
        .map_or(1, |p| p + 1);
    coeffs.truncate(keep);
    Ok(SplineSeries { k, coeffs })
}

/// Centered cardinal B-spline of order `p` (degree `p − 1`), support `[−p/2, p/2]`.
pub fn centered_bspline(p: u32, y: f64) -> f64 {
    let t = y + 0.5 * p as f64;
    if !(0.0..p as f64).contains(&t) {
        return 0.0;
    }
    let p = p as usize;
    // n[i] holds N_q(t − i)
    let mut nq: Vec<f64> = (0..p)
        .map(|i| {
            let s = t - i as f64;
            if (0.0..1.0).contains(&s) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    for q in 2..=p {
        for i in 0..=(p - q) {
            let s = t - i as f64;
            nq[i] = (s * nq[i] + (q as f64 - s) * nq[i + 1]) / (q - 1) as f64;
        }
    }
    nq[0]
}

impl SplineSeries {
    fn eval(&self, x: f64) -> f64 {
        let k = self.k as f64;
        let lo = (x - k).ceil() as i64;
        let hi = (x + k).floor() as i64;
        let mut s = 0.0;
        for l in lo..=hi {
            let idx = l.unsigned_abs() as usize;
            if let Some(&r) = self.coeffs.get(idx) {
                s += r * centered_bspline(2 * self.k, x - l as f64);
            }
        }
        s
    }
}

impl FundamentalFunction {
    pub fn dim(&self) -> usize {
        self.grid.dim
    }

    /// `Λ = (2π)^{n/2} L̂` over the full grid.
    pub fn normalized_values(&self) -> &[f64] {
        &self.values
    }

    /// `L̂` over the full grid.
    pub fn lhat_values(&self) -> Vec<f64> {
        let s = TWO_PI.powf(-0.5 * self.dim() as f64);
        self.values.iter().map(|v| v * s).collect()
    }

    /// `ln(φ̂ + u) = −ln P` on the base cell, row-major.
    pub fn log_base_denominator(&self) -> &[f64] {
        &self.log_denominator
    }

    /// Coordinates of the flat grid index `flat`.
    pub fn grid_point(&self, flat: usize) -> Vec<f64> {
        let axis = self.grid.axis();
        let len = axis.len();
        let mut rem = flat;
        let mut out = vec![0.0; self.dim()];
        for a in (0..self.dim()).rev() {
            out[a] = axis[rem % len];
            rem /= len;
        }
        out
    }

    /// Largest `‖x‖_∞` accepted by `eval_L`.
    pub fn x_max(&self) -> f64 {
        self.grid.x_max()
    }

    fn check_x(&self, x: &[f64]) -> Result<(), FundamentalError> {
        if x.len() != self.dim() {
            return Err(FundamentalError::Domain(format!(
                "point has dimension {} but L has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        let sup = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(sup <= self.x_max()) {
            return Err(FundamentalError::Domain(format!(
                "|x|_inf = {sup} exceeds the quadrature accuracy domain {}; increase points_per_cell",
                self.x_max()
            )));
        }
        Ok(())
    }

    /// `L(x)`.
    #[allow(non_snake_case)]
    pub fn eval_L(&self, x: &[f64]) -> Result<f64, FundamentalError> {
        self.check_x(x)?;
        match &self.spline {
            Some(s) => Ok(s.eval(x[0])),
            None => Ok(self.trapezoid(x)),
        }
    }

    /// `L(x)` by the trapezoid rule over the stored grid, whatever the family.
    #[allow(non_snake_case)]
    pub fn eval_L_quadrature(&self, x: &[f64]) -> Result<f64, FundamentalError> {
        self.check_x(x)?;
        Ok(self.trapezoid(x))
    }

    /// `L` at many points, in input order.
    #[allow(non_snake_case)]
    pub fn eval_L_many(&self, xs: &[Vec<f64>]) -> Result<Vec<f64>, FundamentalError> {
        xs.par_iter().map(|x| self.eval_L(x)).collect()
    }

    fn trapezoid(&self, x: &[f64]) -> f64 {
        let axis = self.grid.axis();
        let len = axis.len();
        let n = self.dim();
        let cosines: Vec<Vec<f64>> = x
            .iter()
            .map(|&xa| axis.iter().map(|&xi| (xa * xi).cos()).collect())
            .collect();
        // Contract the last axis first, then the next, and so on.
        let contract = |t: &[f64], c: &[f64]| -> Vec<f64> {
            t.chunks_exact(len)
                .map(|row| row.iter().zip(c).map(|(v, w)| v * w).sum())
                .collect()
        };
        let mut tensor = contract(&self.values, &cosines[n - 1]);
        for a in (0..n - 1).rev() {
            tensor = contract(&tensor, &cosines[a]);
        }
        let h = self.grid.step();
        tensor[0] * (h / TWO_PI).powi(n as i32)
    }

    /// `max_{‖k‖_∞ ≤ R} |L(k) − δ_{0k}|`.
    pub fn cardinality_check(&self, window_radius: u32) -> Result<f64, FundamentalError> {
        let pts: Vec<Vec<f64>> = lattice::cube_points(self.dim(), window_radius as i64)
            .into_iter()
            .map(|k| k.into_iter().map(|c| c as f64).collect())
            .collect();
        let vals = self.eval_L_many(&pts)?;
        Ok(pts
            .iter()
            .zip(vals)
            .map(|(k, v)| {
                let delta = if k.iter().all(|&c| c == 0.0) { 1.0 } else { 0.0 };
                (v - delta).abs()
            })
            .fold(0.0, f64::max))
    }

    /// `sup (1 + ‖x‖^{n+1}) |L(x)|` over the sample points.
    pub fn decay_check(&self, samples: &[Vec<f64>]) -> Result<f64, FundamentalError> {
        let vals = self.eval_L_many(samples)?;
        let p = self.dim() as i32 + 1;
        Ok(samples
            .iter()
            .zip(vals)
            .map(|(x, v)| (1.0 + lattice::euclidean_norm(x).powi(p)) * v.abs())
            .fold(0.0, f64::max))
    }

    /// `max |Λ − χ_{[−π,π]^n}|` over nodes farther than one step from the
    /// boundary of the base cell.
    pub fn lhat_sup_distance_to_char(&self) -> f64 {
        let axis = self.grid.axis();
        let len = axis.len();
        let h = self.grid.step();
        let n = self.dim();
        let mut worst: f64 = 0.0;
        let mut coords = vec![0.0; n];
        for (flat, &v) in self.values.iter().enumerate() {
            let mut rem = flat;
            for a in (0..n).rev() {
                coords[a] = axis[rem % len];
                rem /= len;
            }
            let inside = coords.iter().all(|c| c.abs() <= PI);
            let dist = if inside {
                coords.iter().map(|c| PI - c.abs()).fold(f64::INFINITY, f64::min)
            } else {
                coords
                    .iter()
                    .map(|c| (c.abs() - PI).max(0.0).powi(2))
                    .sum::<f64>()
                    .sqrt()
            };
            if dist <= h {
                continue;
            }
            let chi = if inside { 1.0 } else { 0.0 };
            worst = worst.max((v - chi).abs());
        }
        worst
    }

    /// Mean over the base cell of `Σ_{stored m≠0} Λ(ξ + 2πm)`, the mass that
    /// sits outside the base cell.
    pub fn shifted_mass(&self) -> f64 {
        let m = self.grid.points_per_cell as usize;
        let cells = self.grid.cells_j as usize;
        let len = self.grid.axis_len();
        let n = self.dim();
        let mut total = 0.0;
        for idx in lattice_points_unsigned(n, len) {
            let in_base = idx.iter().all(|&f| f / m == cells);
            if in_base {
                continue;
            }
            let mut flat = 0usize;
            for &f in &idx {
                flat = flat * len + f;
            }
            total += self.values[flat];
        }
        total / (m as f64).powi(n as i32)
    }

    /// Checks `Λ(ξ + 2πm) ≤ M_m(ξ)` at every stored shifted node.
    pub fn domination_holds(&self) -> Result<bool, FundamentalError> {
        let m = self.grid.points_per_cell as usize;
        let cells = self.grid.cells_j as i64;
        let len = self.grid.axis_len();
        let n = self.dim();
        let h = self.grid.step();
        let units = self.grid.full_units();
        for (flat, &v) in self.values.iter().enumerate() {
            let mut rem = flat;
            let mut cell = vec![0i64; n];
            let mut base_u = vec![0.0; n];
            let mut full_u = vec![0.0; n];
            for a in (0..n).rev() {
                let f = rem % len;
                rem /= len;
                cell[a] = (f / m) as i64 - cells;
                full_u[a] = units[f];
                base_u[a] = units[f] - cell[a] as f64 * m as f64;
            }
            if cell.iter().all(|&c| c == 0) {
                continue;
            }
            let rb = lattice::euclidean_norm(&base_u.iter().map(|u| u * h).collect::<Vec<_>>());
            if rb == 0.0 {
                continue;
            }
            let rs = lattice::euclidean_norm(&full_u.iter().map(|u| u * h).collect::<Vec<_>>());
            let ratio = (self.family.log_phi_hat_radial(rs)? - self.family.log_phi_hat_radial(rb)?).exp();
            if v > ratio {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Σ_{stored m≠0} max_ξ M_m(ξ)` over the base-cell nodes, the summable
    /// envelope that bounds `shifted_mass`.
    pub fn ratio_envelope(&self) -> Result<f64, FundamentalError> {
        let n = self.dim();
        let m = self.grid.points_per_cell as usize;
        let h = self.grid.step();
        let mm = m as f64;
        let base_units = self.grid.base_units();
        let bases = lattice_points_unsigned(n, m);
        let mut total = 0.0;
        for cell in lattice::punctured_cube_points(n, self.grid.cells_j as i64) {
            let mut worst: f64 = 0.0;
            for idx in &bases {
                let units: Vec<f64> = idx.iter().map(|&i| base_units[i]).collect();
                let rb = units.iter().map(|u| (u * h).powi(2)).sum::<f64>().sqrt();
                if rb == 0.0 {
                    continue;
                }
                let rs = units
                    .iter()
                    .zip(&cell)
                    .map(|(u, &c)| ((u + c as f64 * mm) * h).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let r = (self.family.log_phi_hat_radial(rs)? - self.family.log_phi_hat_radial(rb)?).exp();
                worst = worst.max(r);
            }
            total += worst;
        }
        Ok(total)
    }

    /// Largest first or second finite difference quotient of `Λ` along any
    /// axis. A smoke test for bounded derivatives of `L̂`, not a proof.
    pub fn derivative_probe(&self, order: u32) -> Result<f64, FundamentalError> {
        if !(1..=2).contains(&order) {
            return Err(FundamentalError::Domain("derivative probe supports orders 1 and 2".into()));
        }
        let len = self.grid.axis_len();
        let n = self.dim();
        let h = self.grid.step();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            let stride = len.pow((n - 1 - a) as u32);
            for flat in 0..self.values.len() {
                let pos = (flat / stride) % len;
                let d = match order {
                    1 if pos + 1 < len => (self.values[flat + stride] - self.values[flat]) / h,
                    2 if pos >= 1 && pos + 1 < len => {
                        (self.values[flat + stride] - 2.0 * self.values[flat] + self.values[flat - stride])
                            / (h * h)
                    }
                    _ => continue,
                };
                worst = worst.max(d.abs());
            }
        }
        Ok(worst)
    }
}
