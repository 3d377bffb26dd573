use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalg::{Grid, Interval, RealFunction};

/// Sup-norm residual over a grid with argmax location and optional trace;
/// the universal verification result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub sup: f64,
    pub argmax: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TracePoint>>,
    pub grid: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TracePoint {
    pub x: f64,
    pub residual: f64,
}

impl ResidualReport {
    /// Reduce per-point residuals to a report. Maximum by value, ties broken
    /// by smaller x, so the result is independent of evaluation order.
    pub fn from_trace(points: Vec<TracePoint>, grid: &Grid, keep_trace: bool) -> ResidualReport {
        let mut sup = 0.0;
        let mut argmax = f64::NAN;
        for p in &points {
            let r = p.residual.abs();
            if argmax.is_nan() || r > sup || (r == sup && p.x < argmax) {
                sup = r;
                argmax = p.x;
            }
        }
        ResidualReport {
            sup,
            argmax,
            trace: keep_trace.then_some(points),
            grid: grid.description().to_string(),
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.sup <= tol
    }
}

/// Evaluate a pointwise residual over a grid and reduce it.
pub fn residual_sweep(
    grid: &Grid,
    keep_trace: bool,
    mut residual_at: impl FnMut(f64) -> Result<f64>,
) -> Result<ResidualReport> {
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid.points() {
        let r = residual_at(x).map_err(|e| e.at_grid_point(x))?;
        if !r.is_finite() {
            return Err(Error::NonFinite {
                x,
                context: "residual",
            }
            .at_grid_point(x));
        }
        points.push(TracePoint { x, residual: r });
    }
    Ok(ResidualReport::from_trace(points, grid, keep_trace))
}

/// The commutator defect sup |g(h(x)) − h(g(x))| over the grid.
pub fn commutator_residual(
    g: &RealFunction,
    h: &RealFunction,
    grid: &Grid,
) -> Result<ResidualReport> {
    residual_sweep(grid, false, |x| {
        let gh = g.evaluate(h.evaluate(x)?)?;
        let hg = h.evaluate(g.evaluate(x)?)?;
        Ok(gh - hg)
    })
}

/// Same as [`commutator_residual`] but retaining the per-point trace.
pub fn commutator_residual_traced(
    g: &RealFunction,
    h: &RealFunction,
    grid: &Grid,
) -> Result<ResidualReport> {
    residual_sweep(grid, true, |x| {
        let gh = g.evaluate(h.evaluate(x)?)?;
        let hg = h.evaluate(g.evaluate(x)?)?;
        Ok(gh - hg)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeInequality {
    /// xg(x) ≥ 0
    SignAgreement,
    /// x(x − g(x)) ≥ 0
    BelowIdentity,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConeViolation {
    pub x: f64,
    pub inequality: ConeInequality,
    pub value: f64,
}

/// Outcome of a bow-tie cone membership check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeReport {
    pub member: bool,
    pub strict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<ConeViolation>,
}

/// Check the bow-tie inequalities xg(x) ≥ 0 and x(x − g(x)) ≥ 0 over the
/// grid; `strict` additionally demands strict inequality at nonzero points.
/// Violations are data, not errors.
pub fn cone_check(
    g: &RealFunction,
    interval: Interval,
    grid: &Grid,
    strict: bool,
) -> Result<ConeReport> {
    grid.check_within(&interval)?;
    let mut member = true;
    let mut all_strict = true;
    let mut first_violation = None;
    for &x in grid.points() {
        let gx = g.evaluate(x).map_err(|e| e.at_grid_point(x))?;
        let first = x * gx;
        let second = x * (x - gx);
        for (value, inequality) in [
            (first, ConeInequality::SignAgreement),
            (second, ConeInequality::BelowIdentity),
        ] {
            let violates = value < 0.0;
            let violates_strict = x != 0.0 && value <= 0.0;
            if violates_strict {
                all_strict = false;
            }
            if violates {
                member = false;
            }
            if (violates || (strict && violates_strict)) && first_violation.is_none() {
                first_violation = Some(ConeViolation {
                    x,
                    inequality,
                    value,
                });
            }
        }
    }
    Ok(ConeReport {
        member,
        strict: all_strict,
        first_violation,
    })
}
