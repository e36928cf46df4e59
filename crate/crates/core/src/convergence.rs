//! Parameter sweeps: build the fundamental function for each member of a
//! family, interpolate a band-limited test function and record how far the
//! result is from the target.
//!
//! The checks applied by `judge` compare successive rows of a sparse
//! parameter ladder. They are a finite-scale proxy for limits, not a claim
//! that the errors are monotone for every parameter.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::FamilySpec;
use crate::fundamental::{build_lhat, FrequencyGrid, FundamentalError};
use crate::interpolation::{self, default_window_radius, InterpolationError, XGrid};
use crate::io::{format_float, write_csv};
use crate::paleywiener::{self, BandlimitedFunction, PaleyWienerError};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("cannot read plan {path}: {message}")]
    Io { path: String, message: String },
    #[error("parameter {param}: {message}")]
    Row { param: f64, message: String },
}

/// Grid settings of a plan; the dimension comes from the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanGrid {
    pub cells_j: u32,
    pub points_per_cell: u32,
    #[serde(default = "yes")]
    pub offset: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub cardinality_tol: f64,
    #[serde(default)]
    pub final_error_tol: Option<f64>,
    /// Required `final ≤ decrease_factor × initial` for both error columns.
    pub decrease_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    /// Family kind, dimension and fixed parameters; the swept one is
    /// overwritten by each entry of `param_values`.
    pub family: FamilySpec,
    pub param_values: Vec<f64>,
    pub test_function: BandlimitedFunction,
    /// `[lo, hi]`, applied to every axis.
    pub x_domain: [f64; 2],
    pub step: f64,
    #[serde(default)]
    pub grid: Option<PlanGrid>,
    #[serde(default)]
    pub window_radius: Option<u32>,
    /// Radius of the lattice window used for the cardinality column.
    #[serde(default = "five")]
    pub cardinality_radius: u32,
    pub tolerances: Tolerances,
}

fn five() -> u32 {
    5
}

impl SweepPlan {
    pub fn from_json_file(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path).map_err(|e| SweepError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let plan: SweepPlan = serde_json::from_str(&text).map_err(|e| SweepError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn frequency_grid(&self) -> FrequencyGrid {
        match self.grid {
            Some(g) => FrequencyGrid {
                dim: self.family.dim,
                cells_j: g.cells_j,
                points_per_cell: g.points_per_cell,
                offset: g.offset,
            },
            None => FrequencyGrid::default_for(self.family.dim),
        }
    }

    pub fn window(&self) -> u32 {
        self.window_radius
            .unwrap_or_else(|| default_window_radius(self.family.dim))
    }

    pub fn specs(&self) -> Result<Vec<FamilySpec>, SweepError> {
        self.param_values
            .iter()
            .map(|&p| {
                self.family
                    .with_parameter(p)
                    .map_err(|e| SweepError::InvalidPlan(format!("parameter {p}: {e}")))
            })
            .collect()
    }

    /// Full spatial grid.
    pub fn x_grid(&self) -> Result<XGrid, SweepError> {
        XGrid::new(self.family.dim, self.x_domain[0], self.x_domain[1], self.step)
            .map_err(|e| SweepError::InvalidPlan(e.to_string()))
    }

    /// Points of the central half of the domain, where errors are measured.
    pub fn measured_points(&self) -> Result<Vec<Vec<f64>>, SweepError> {
        let g = self.x_grid()?;
        let c = 0.5 * (g.lo + g.hi);
        let q = 0.25 * (g.hi - g.lo);
        Ok(g.points()
            .into_iter()
            .filter(|x| x.iter().all(|v| (v - c).abs() <= q * (1.0 + 1e-12)))
            .collect())
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |m: String| Err(SweepError::InvalidPlan(m));
        if self.param_values.is_empty() {
            return bad("param_values is empty".into());
        }
        if self.param_values.windows(2).any(|w| w[1] <= w[0]) {
            return bad("param_values must be strictly increasing".into());
        }
        self.specs()?;
        if self.test_function.dim != self.family.dim {
            return bad("test function and family dimensions differ".into());
        }
        self.test_function
            .validate()
            .map_err(|e| SweepError::InvalidPlan(e.to_string()))?;
        self.frequency_grid()
            .validate()
            .map_err(|e| SweepError::InvalidPlan(e.to_string()))?;
        let g = self.x_grid()?;
        let x_max = self.frequency_grid().x_max();
        if g.lo.abs().max(g.hi.abs()) > x_max {
            return bad(format!("x_domain exceeds the quadrature accuracy domain {x_max}"));
        }
        if self.cardinality_radius as f64 > x_max {
            return bad("cardinality_radius exceeds the quadrature accuracy domain".into());
        }
        let t = &self.tolerances;
        if !(t.cardinality_tol > 0.0) || !(t.decrease_factor > 0.0) {
            return bad("tolerances must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    /// Sup of `|I f − f|` over the central half of the domain.
    pub sup_error: f64,
    /// Discrete `L²` norm of `I f − f` over the central half.
    pub l2_error: f64,
    /// `max |(2π)^{n/2} L̂ − χ|` away from the cell boundary.
    pub lhat_char_distance: f64,
    /// Mean over the base cell of `Σ_{m≠0} (2π)^{n/2} L̂(ξ + 2πm)`.
    pub shifted_mass: f64,
    pub cardinality_deviation: f64,
    /// `L̂(ξ + 2πm) ≤ M_m(ξ)` held at every stored node.
    pub domination_ok: bool,
    /// `Σ_{m≠0} max_ξ M_m(ξ)`.
    pub ratio_envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: String,
    pub rows: Vec<SweepRow>,
    /// Measure of the region the errors are taken over.
    pub measured_volume: f64,
}

fn row_error(param: f64) -> impl Fn(String) -> SweepError {
    move |message| SweepError::Row { param, message }
}

fn run_row(plan: &SweepPlan, spec: &FamilySpec, points: &[Vec<f64>]) -> Result<SweepRow, SweepError> {
    let param = spec.parameter();
    let err = row_error(param);
    let fe = |e: FundamentalError| err(e.to_string());
    let fund = build_lhat(spec, &plan.frequency_grid()).map_err(fe)?;
    let data = paleywiener::sample_lattice(&plan.test_function, plan.window())
        .map_err(|e: PaleyWienerError| err(e.to_string()))?;
    let values = interpolation::interpolate_grid(&fund, &data, points)
        .map_err(|e: InterpolationError| err(e.to_string()))?;
    let sup_error = values
        .iter()
        .zip(points)
        .map(|(v, x)| (v - paleywiener::eval_f(&plan.test_function, x)).abs())
        .fold(0.0, f64::max);
    let weight = plan.step.powi(spec.dim as i32);
    let l2_error = paleywiener::l2_distance(&plan.test_function, &values, points, weight)
        .map_err(|e| err(e.to_string()))?;
    Ok(SweepRow {
        param,
        sup_error,
        l2_error,
        lhat_char_distance: fund.lhat_sup_distance_to_char(),
        shifted_mass: fund.shifted_mass(),
        cardinality_deviation: fund.cardinality_check(plan.cardinality_radius).map_err(fe)?,
        domination_ok: fund.domination_holds().map_err(fe)?,
        ratio_envelope: fund.ratio_envelope().map_err(fe)?,
    })
}

/// Runs every parameter of the plan. Rows are independent and computed in
/// parallel; the output order follows `param_values`.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult, SweepError> {
    plan.validate()?;
    let specs = plan.specs()?;
    let points = plan.measured_points()?;
    let rows = specs
        .par_iter()
        .map(|s| {
            log::info!("sweep row {}", s.describe());
            run_row(plan, s, &points)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = plan.family.dim as i32;
    let measured_volume = (0.5 * (plan.x_domain[1] - plan.x_domain[0])).powi(n);
    Ok(SweepResult {
        family: plan.family.kind.name().to_string(),
        rows,
        measured_volume,
    })
}

impl SweepResult {
    pub fn csv_header() -> Vec<String> {
        [
            "param",
            "sup_error",
            "l2_error",
            "lhat_char_distance",
            "shifted_mass",
            "cardinality_deviation",
            "domination_ok",
            "ratio_envelope",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    format_float(r.param),
                    format_float(r.sup_error),
                    format_float(r.l2_error),
                    format_float(r.lhat_char_distance),
                    format_float(r.shifted_mass),
                    format_float(r.cardinality_deviation),
                    r.domination_ok.to_string(),
                    format_float(r.ratio_envelope),
                ]
            })
            .collect()
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        write_csv(path, &Self::csv_header(), &self.csv_rows())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` when the check does not apply (e.g. ladders of one row).
    pub pass: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.pass == Some(false)).collect()
    }
}

fn nonincreasing(name: &str, params: &[f64], col: &[f64]) -> Check {
    let bad: Vec<String> = col
        .windows(2)
        .zip(params.windows(2))
        .filter(|(v, _)| v[1] > v[0])
        .map(|(v, p)| format!("{} -> {}: {:e} -> {:e}", p[0], p[1], v[0], v[1]))
        .collect();
    Check {
        name: format!("{name} nonincreasing"),
        pass: Some(bad.is_empty()),
        detail: if bad.is_empty() {
            format!("{} steps", col.len() - 1)
        } else {
            format!("increases at {}", bad.join("; "))
        },
    }
}

fn decreased_by(name: &str, col: &[f64], factor: f64) -> Check {
    let (first, last) = (col[0], col[col.len() - 1]);
    Check {
        name: format!("{name} final <= {factor} x initial"),
        pass: Some(last <= factor * first),
        detail: format!("initial {first:e}, final {last:e}, ratio {:.4}", last / first),
    }
}

/// Applies the plan's pass criteria to a sweep result.
pub fn judge(result: &SweepResult, plan: &SweepPlan) -> Verdict {
    let rows = &result.rows;
    let params: Vec<f64> = rows.iter().map(|r| r.param).collect();
    let col = |f: fn(&SweepRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let mut checks = Vec::new();
    if rows.len() >= 2 {
        let sup = col(|r| r.sup_error);
        let l2 = col(|r| r.l2_error);
        checks.push(nonincreasing("sup_error", &params, &sup));
        checks.push(nonincreasing("l2_error", &params, &l2));
        checks.push(decreased_by("sup_error", &sup, plan.tolerances.decrease_factor));
        checks.push(decreased_by("l2_error", &l2, plan.tolerances.decrease_factor));
        checks.push(nonincreasing("lhat_char_distance", &params, &col(|r| r.lhat_char_distance)));
        checks.push(nonincreasing("shifted_mass", &params, &col(|r| r.shifted_mass)));
    } else {
        checks.push(Check {
            name: "parameter ladder".into(),
            pass: None,
            detail: format!("{} row(s); monotonicity not judged", rows.len()),
        });
    }
    if let (Some(tol), Some(last)) = (plan.tolerances.final_error_tol, rows.last()) {
        checks.push(Check {
            name: "final sup_error within tolerance".into(),
            pass: Some(last.sup_error <= tol),
            detail: format!("{:e} vs {tol:e}", last.sup_error),
        });
    }
    let worst_card = rows.iter().map(|r| r.cardinality_deviation).fold(0.0, f64::max);
    checks.push(Check {
        name: "cardinality".into(),
        pass: Some(rows.iter().all(|r| r.cardinality_deviation <= plan.tolerances.cardinality_tol)),
        detail: format!("max deviation {worst_card:e}, tolerance {:e}", plan.tolerances.cardinality_tol),
    });
    let bad_dom: Vec<String> = rows
        .iter()
        .filter(|r| !r.domination_ok || r.shifted_mass > r.ratio_envelope)
        .map(|r| r.param.to_string())
        .collect();
    checks.push(Check {
        name: "shifted-cell domination".into(),
        pass: Some(bad_dom.is_empty()),
        detail: if bad_dom.is_empty() {
            "holds on every row".into()
        } else {
            format!("fails for parameters {}", bad_dom.join(", "))
        },
    });
    let vol = result.measured_volume.sqrt();
    checks.push(Check {
        name: "l2_error <= sup_error x sqrt(volume)".into(),
        pass: Some(rows.iter().all(|r| r.l2_error <= r.sup_error * vol * (1.0 + 1e-12))),
        detail: format!("volume {}", result.measured_volume),
    });
    Verdict {
        pass: checks.iter().all(|c| c.pass != Some(false)),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(param: f64, e: f64) -> SweepRow {
        SweepRow {
            param,
            sup_error: e,
            l2_error: e,
            lhat_char_distance: e,
            shifted_mass: e,
            cardinality_deviation: 1e-12,
            domination_ok: true,
            ratio_envelope: 1.0,
        }
    }

    fn plan() -> SweepPlan {
        SweepPlan {
            family: FamilySpec::gaussian(1, 1.0),
            param_values: vec![1.0, 2.0, 4.0],
            test_function: BandlimitedFunction::tensor_sinc(1),
            x_domain: [-2.0, 2.0],
            step: 0.25,
            grid: Some(PlanGrid {
                cells_j: 2,
                points_per_cell: 32,
                offset: true,
            }),
            window_radius: Some(4),
            cardinality_radius: 3,
            tolerances: Tolerances {
                cardinality_tol: 1e-6,
                final_error_tol: None,
                decrease_factor: 0.5,
            },
        }
    }

    fn result(errs: &[f64]) -> SweepResult {
        SweepResult {
            family: "gaussian".into(),
            rows: errs.iter().enumerate().map(|(i, &e)| row(i as f64, e)).collect(),
            measured_volume: 2.0,
        }
    }

    #[test]
    fn monotone_result_passes() {
        assert!(judge(&result(&[1.0, 0.5, 0.1]), &plan()).pass);
    }

    #[test]
    fn increasing_step_is_named() {
        let v = judge(&result(&[1.0, 1.5, 0.1]), &plan());
        assert!(!v.pass);
        let f = v.failed();
        assert!(f.iter().any(|c| c.name.starts_with("sup_error nonincreasing") && c.detail.contains("0 -> 1")));
    }

    #[test]
    fn single_row_skips_ladder() {
        let v = judge(&result(&[1.0]), &plan());
        assert!(v.pass);
        assert!(v.checks.iter().any(|c| c.pass.is_none()));
    }

    #[test]
    fn small_sweep_runs_and_is_deterministic() {
        let p = plan();
        let a = run_sweep(&p).unwrap();
        let b = run_sweep(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 3);
        assert!(judge(&a, &p).pass, "{:#?}", judge(&a, &p));
    }

    #[test]
    fn invalid_plans_rejected() {
        let mut p = plan();
        p.param_values = vec![2.0, 1.0];
        assert!(p.validate().is_err());
        let mut p = plan();
        p.param_values = vec![0.5];
        assert!(p.validate().is_err());
        let mut p = plan();
        p.x_domain = [-100.0, 100.0];
        assert!(p.validate().is_err());
    }
}
