//! Cardinal interpolation `I f(x) = Σ_j f(j) L(x − j)` of finite-window data.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fundamental::{FundamentalError, FundamentalFunction};
use crate::lattice;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpolationError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("stability ratio undefined for all-zero data")]
    UndefinedRatio,
    #[error(transparent)]
    Fundamental(#[from] FundamentalError),
}

/// Norms of the full (possibly infinite) sample sequence, when known.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DeclaredNorms {
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub linf: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "1" => Some(Norm::L1),
            "2" => Some(Norm::L2),
            "inf" | "Inf" | "infinity" => Some(Norm::Linf),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::Linf => "inf",
        }
    }

    /// Discrete norm of `values`, each sample carrying weight `w`.
    pub fn weighted(&self, values: &[f64], w: f64) -> f64 {
        match self {
            Norm::L1 => values.iter().map(|v| v.abs()).sum::<f64>() * w,
            Norm::L2 => (values.iter().map(|v| v * v).sum::<f64>() * w).sqrt(),
            Norm::Linf => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

/// Samples `f(j)` for `‖j‖_∞ ≤ R`, row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeData {
    dim: usize,
    window_radius: u32,
    values: Vec<f64>,
    #[serde(default)]
    declared_norms: DeclaredNorms,
}

/// Data window used by default: 32 in one dimension, 12 in two.
pub fn default_window_radius(dim: usize) -> u32 {
    match dim {
        1 => 32,
        2 => 12,
        _ => 6,
    }
}

impl LatticeData {
    pub fn new(dim: usize, window_radius: u32, values: Vec<f64>) -> Result<Self, InterpolationError> {
        if dim == 0 || window_radius == 0 {
            return Err(InterpolationError::InvalidData(
                "dimension and window radius must be positive".into(),
            ));
        }
        let side = 2 * window_radius as usize + 1;
        let want = side.pow(dim as u32);
        if values.len() != want {
            return Err(InterpolationError::InvalidData(format!(
                "expected {want} values for radius {window_radius} in dimension {dim}, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(InterpolationError::InvalidData("values must be finite".into()));
        }
        Ok(Self {
            dim,
            window_radius,
            values,
            declared_norms: DeclaredNorms::default(),
        })
    }

    /// Builds a window from `(j, value)` pairs; missing points are zero.
    pub fn from_points(
        dim: usize,
        window_radius: u32,
        points: &[(Vec<i64>, f64)],
    ) -> Result<Self, InterpolationError> {
        let side = 2 * window_radius as usize + 1;
        let mut values = vec![0.0; side.pow(dim as u32)];
        for (j, v) in points {
            if j.len() != dim {
                return Err(InterpolationError::Dimension(format!(
                    "lattice point {j:?} in a {dim}-dimensional window"
                )));
            }
            let i = lattice::cube_index(j, window_radius as i64).ok_or_else(|| {
                InterpolationError::InvalidData(format!("point {j:?} lies outside radius {window_radius}"))
            })?;
            values[i] = *v;
        }
        Self::new(dim, window_radius, values)
    }

    /// `δ_{j0}` on a window of radius `R`.
    pub fn delta(dim: usize, window_radius: u32, j0: &[i64]) -> Result<Self, InterpolationError> {
        Self::from_points(dim, window_radius, &[(j0.to_vec(), 1.0)])
    }

    /// Attaches norms of the full sequence; the window's own `l²` norm may not
    /// exceed a declared `l²` norm.
    pub fn with_declared_norms(mut self, norms: DeclaredNorms) -> Result<Self, InterpolationError> {
        if let Some(l2) = norms.l2 {
            let partial = self.window_norm(Norm::L2);
            if partial > l2 * (1.0 + 1e-12) {
                return Err(InterpolationError::InvalidData(format!(
                    "window l2 norm {partial} exceeds the declared {l2}"
                )));
            }
        }
        self.declared_norms = norms;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window_radius(&self) -> u32 {
        self.window_radius
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn declared_norms(&self) -> DeclaredNorms {
        self.declared_norms
    }

    /// Lattice points in storage order.
    pub fn points(&self) -> Vec<Vec<i64>> {
        lattice::cube_points(self.dim, self.window_radius as i64)
    }

    /// `l^p` norm of the window.
    pub fn window_norm(&self, p: Norm) -> f64 {
        p.weighted(&self.values, 1.0)
    }

    /// `a·self + b·other` on the same window.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self, InterpolationError> {
        if self.dim != other.dim || self.window_radius != other.window_radius {
            return Err(InterpolationError::Dimension("windows differ".into()));
        }
        let v = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Self::new(self.dim, self.window_radius, v)
    }

    /// Data translated by `j0`; samples pushed out of the window are dropped.
    pub fn translated(&self, j0: &[i64]) -> Result<Self, InterpolationError> {
        if j0.len() != self.dim {
            return Err(InterpolationError::Dimension("shift has the wrong dimension".into()));
        }
        let r = self.window_radius as i64;
        let mut out = vec![0.0; self.values.len()];
        for (j, v) in self.points().iter().zip(&self.values) {
            let t: Vec<i64> = j.iter().zip(j0).map(|(a, b)| a + b).collect();
            if let Some(i) = lattice::cube_index(&t, r) {
                out[i] = *v;
            }
        }
        Self::new(self.dim, self.window_radius, out)
    }
}

/// `count` windows of radius `R` with entries uniform in `[−1, 1]`, drawn from
/// a ChaCha stream seeded with `seed`.
pub fn random_window_data(
    dim: usize,
    window_radius: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<LatticeData>, InterpolationError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let len = (2 * window_radius as usize + 1).pow(dim as u32);
    (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            LatticeData::new(dim, window_radius, v)
        })
        .collect()
}

/// Interpolant value with bookkeeping about what was left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interpolated {
    pub value: f64,
    /// Nonzero samples whose kernel argument fell outside the accuracy domain.
    pub skipped: usize,
    pub warning: Option<String>,
}

fn check_dims(fund: &FundamentalFunction, data: &LatticeData) -> Result<(), InterpolationError> {
    if fund.dim() != data.dim {
        return Err(InterpolationError::Dimension(format!(
            "fundamental function has dimension {} but data has dimension {}",
            fund.dim(),
            data.dim
        )));
    }
    Ok(())
}

fn window_warning(x: &[f64], radius: u32, skipped: usize) -> Option<String> {
    let sup = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if skipped > 0 {
        Some(format!("{skipped} samples skipped: kernel argument outside the accuracy domain"))
    } else if sup > radius as f64 {
        Some(format!(
            "x lies outside the data window of radius {radius}; the missing tail is not represented"
        ))
    } else {
        None
    }
}

/// `Σ_{‖j‖_∞ ≤ R} f(j) L(x − j)`.
pub fn interpolate(
    fund: &FundamentalFunction,
    data: &LatticeData,
    x: &[f64],
) -> Result<Interpolated, InterpolationError> {
    check_dims(fund, data)?;
    if x.len() != data.dim {
        return Err(InterpolationError::Dimension("point has the wrong dimension".into()));
    }
    let x_max = fund.x_max();
    let mut value = 0.0;
    let mut skipped = 0;
    for (j, &f) in data.points().iter().zip(&data.values) {
        if f == 0.0 {
            continue;
        }
        let t: Vec<f64> = x.iter().zip(j).map(|(a, &b)| a - b as f64).collect();
        if t.iter().any(|v| v.abs() > x_max) {
            skipped += 1;
            continue;
        }
        value += f * fund.eval_L(&t)?;
    }
    Ok(Interpolated {
        value,
        skipped,
        warning: window_warning(x, data.window_radius, skipped),
    })
}

/// `C Σ_{‖j‖_∞ > R} (1 + ‖x − j‖^{n+1})^{−1} ‖f‖_∞`, the size of the data the
/// window leaves out under the decay bound `|L(y)| ≤ C / (1 + ‖y‖^{n+1})`.
pub fn truncation_tail_estimate(data: &LatticeData, x: &[f64], decay_constant: f64) -> f64 {
    let n = data.dim;
    let sup_x = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let linf = data
        .declared_norms
        .linf
        .unwrap_or_else(|| data.window_norm(Norm::Linf));
    let r = data.window_radius as u64;
    let last = r + 20_000;
    let mut s_sum = 0.0;
    for s in (r + 1)..=last {
        let d = (s as f64 - sup_x).max(0.0);
        s_sum += lattice::shell_count(n, s) / (1.0 + d.powi(n as i32 + 1));
    }
    // Shells beyond `last`: count(s) ≤ 2n(2s+1)^{n−1} and d ≥ s/2.
    let big = last as f64;
    let rem = 2.0 * n as f64 * 3f64.powi(n as i32 - 1) * 2f64.powi(n as i32 + 1) / big;
    decay_constant * linf * (s_sum + rem)
}

/// Kernel values `L(x_i − j)` for every point and every nonzero sample,
/// memoized on the exact argument so coinciding arguments share one
/// evaluation. Entries outside the accuracy domain are `None`.
struct KernelTable {
    columns: Vec<usize>,
    entries: Vec<Option<f64>>,
}

fn kernel_table(
    fund: &FundamentalFunction,
    data: &LatticeData,
    xs: &[Vec<f64>],
) -> Result<KernelTable, InterpolationError> {
    let points = data.points();
    let columns: Vec<usize> = (0..points.len()).filter(|&i| data.values[i] != 0.0).collect();
    let x_max = fund.x_max();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut unique: Vec<Vec<f64>> = Vec::new();
    let mut slots = Vec::with_capacity(xs.len() * columns.len());
    for x in xs {
        if x.len() != data.dim {
            return Err(InterpolationError::Dimension("point has the wrong dimension".into()));
        }
        for &c in &columns {
            let t: Vec<f64> = x.iter().zip(&points[c]).map(|(a, &b)| a - b as f64).collect();
            if t.iter().any(|v| v.abs() > x_max) {
                slots.push(None);
                continue;
            }
            let key: Vec<u64> = t.iter().map(|v| (v + 0.0).to_bits()).collect();
            let next = unique.len();
            let id = *index.entry(key).or_insert_with(|| {
                unique.push(t);
                next
            });
            slots.push(Some(id));
        }
    }
    let vals = fund.eval_L_many(&unique)?;
    Ok(KernelTable {
        columns,
        entries: slots.into_iter().map(|s| s.map(|i| vals[i])).collect(),
    })
}

impl KernelTable {
    fn apply(&self, data: &LatticeData, n_points: usize) -> Vec<(f64, usize)> {
        let w = self.columns.len();
        (0..n_points)
            .map(|i| {
                let mut value = 0.0;
                let mut skipped = 0;
                for (k, &c) in self.columns.iter().enumerate() {
                    match self.entries[i * w + k] {
                        Some(l) => value += data.values[c] * l,
                        None => skipped += 1,
                    }
                }
                (value, skipped)
            })
            .collect()
    }
}

/// `interpolate` at every point of `xs`, in order.
pub fn interpolate_grid(
    fund: &FundamentalFunction,
    data: &LatticeData,
    xs: &[Vec<f64>],
) -> Result<Vec<f64>, InterpolationError> {
    check_dims(fund, data)?;
    let table = kernel_table(fund, data, xs)?;
    Ok(table.apply(data, xs.len()).into_iter().map(|(v, _)| v).collect())
}

/// Like `interpolate_grid` but keeps the per-point metadata.
pub fn interpolate_grid_detailed(
    fund: &FundamentalFunction,
    data: &LatticeData,
    xs: &[Vec<f64>],
) -> Result<Vec<Interpolated>, InterpolationError> {
    check_dims(fund, data)?;
    let table = kernel_table(fund, data, xs)?;
    Ok(table
        .apply(data, xs.len())
        .into_iter()
        .zip(xs)
        .map(|((value, skipped), x)| Interpolated {
            value,
            skipped,
            warning: window_warning(x, data.window_radius, skipped),
        })
        .collect())
}

/// Uniform cube grid `{lo + i·step}^n`, `i = 0..=count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XGrid {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl XGrid {
    pub fn new(dim: usize, lo: f64, hi: f64, step: f64) -> Result<Self, InterpolationError> {
        let g = Self { dim, lo, hi, step };
        g.steps()?;
        Ok(g)
    }

    /// Symmetric grid `[−half_width, half_width]^n`.
    pub fn symmetric(dim: usize, half_width: f64, step: f64) -> Result<Self, InterpolationError> {
        Self::new(dim, -half_width, half_width, step)
    }

    fn steps(&self) -> Result<usize, InterpolationError> {
        if self.dim == 0 || !(self.step > 0.0) || !(self.hi > self.lo) {
            return Err(InterpolationError::Domain(format!("bad grid {self:?}")));
        }
        let q = (self.hi - self.lo) / self.step;
        let r = q.round();
        if (q - r).abs() > 1e-9 * q.max(1.0) {
            return Err(InterpolationError::Domain(format!(
                "step {} does not divide [{}, {}]",
                self.step, self.lo, self.hi
            )));
        }
        Ok(r as usize)
    }

    pub fn axis(&self) -> Vec<f64> {
        let count = self.steps().expect("validated grid");
        (0..=count).map(|i| self.lo + i as f64 * self.step).collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let axis = self.axis();
        let mut out = vec![Vec::with_capacity(self.dim)];
        for _ in 0..self.dim {
            let mut next = Vec::with_capacity(out.len() * axis.len());
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

    /// Quadrature weight `step^n`.
    pub fn weight(&self) -> f64 {
        self.step.powi(self.dim as i32)
    }

    pub fn measure(&self) -> f64 {
        (self.hi - self.lo).powi(self.dim as i32)
    }
}

fn check_stability_domain(data: &LatticeData, domain: &XGrid) -> Result<(), InterpolationError> {
    if domain.dim != data.dim {
        return Err(InterpolationError::Dimension("domain and data dimensions differ".into()));
    }
    let need = data.window_radius as f64 + 4.0;
    if domain.lo > -need || domain.hi < need {
        return Err(InterpolationError::Domain(format!(
            "domain [{}, {}] must cover the data window plus a margin of 4, i.e. [-{need}, {need}]",
            domain.lo, domain.hi
        )));
    }
    Ok(())
}

/// `‖I f‖_{L^p(domain)} / ‖f‖_{l^p}` with the discrete norm of the domain grid.
pub fn lp_stability(
    fund: &FundamentalFunction,
    data: &LatticeData,
    p: Norm,
    domain: &XGrid,
) -> Result<f64, InterpolationError> {
    let r = lp_stability_suite(fund, std::slice::from_ref(data), &[p], domain)?;
    Ok(r[0][0])
}

/// Stability ratios for several data vectors on one window and several `p`,
/// sharing the kernel evaluations. Result is indexed `[data][p]`.
pub fn lp_stability_suite(
    fund: &FundamentalFunction,
    datas: &[LatticeData],
    ps: &[Norm],
    domain: &XGrid,
) -> Result<Vec<Vec<f64>>, InterpolationError> {
    let first = datas
        .first()
        .ok_or_else(|| InterpolationError::InvalidData("no data vectors".into()))?;
    check_dims(fund, first)?;
    check_stability_domain(first, domain)?;
    if datas
        .iter()
        .any(|d| d.dim != first.dim || d.window_radius != first.window_radius)
    {
        return Err(InterpolationError::Dimension("data windows differ".into()));
    }
    let xs = domain.points();
    // Kernel for every window point so one table serves all vectors.
    let full = LatticeData::new(first.dim, first.window_radius, vec![1.0; first.values.len()])?;
    let table = kernel_table(fund, &full, &xs)?;
    datas
        .par_iter()
        .map(|d| {
            let denoms: Vec<f64> = ps.iter().map(|&p| d.window_norm(p)).collect();
            if denoms.contains(&0.0) {
                return Err(InterpolationError::UndefinedRatio);
            }
            let vals: Vec<f64> = table.apply(d, xs.len()).into_iter().map(|(v, _)| v).collect();
            Ok(ps
                .iter()
                .zip(&denoms)
                .map(|(p, den)| p.weighted(&vals, domain.weight()) / den)
                .collect())
        })
        .collect()
}
