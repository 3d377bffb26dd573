use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalg::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// What to do when an evaluation point falls outside the node range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionPolicy {
    /// Refuse to extrapolate.
    #[default]
    Error,
    /// Hold the terminal ordinate.
    Clamp,
    /// Continue the terminal segment's slope in log-abscissa space.
    AsymptoticLinearInLog,
}

/// Default inverse tolerance for interpolant-backed functions.
pub const INTERPOLANT_INVERSE_TOL: f64 = 1e-9;
/// Default inverse tolerance for closed-form functions.
pub const CLOSED_FORM_INVERSE_TOL: f64 = 1e-12;

/// Strictly monotone sampled function with piecewise-linear interpolation.
///
/// Linear interpolation preserves strict monotonicity between nodes, which is
/// what keeps cone-membership verdicts trustworthy for sampled functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneInterpolant {
    nodes: Vec<f64>,
    values: Vec<f64>,
    direction: Direction,
    #[serde(default)]
    extension: ExtensionPolicy,
}

impl MonotoneInterpolant {
    pub fn new(
        nodes: Vec<f64>,
        values: Vec<f64>,
        direction: Direction,
        extension: ExtensionPolicy,
    ) -> Result<MonotoneInterpolant> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::Validation(format!(
                "interpolant needs matching node/value lists of length >= 2, got {}/{}",
                nodes.len(),
                values.len()
            )));
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::NonMonotone { index: i });
            }
        }
        for (i, w) in values.windows(2).enumerate() {
            let ok = match direction {
                Direction::Increasing => w[0] < w[1],
                Direction::Decreasing => w[0] > w[1],
            };
            if !ok {
                return Err(Error::NonMonotone { index: i });
            }
        }
        Ok(MonotoneInterpolant {
            nodes,
            values,
            direction,
            extension,
        })
    }

    /// Increasing interpolant with the default extension policy.
    pub fn increasing(nodes: Vec<f64>, values: Vec<f64>) -> Result<MonotoneInterpolant> {
        MonotoneInterpolant::new(nodes, values, Direction::Increasing, ExtensionPolicy::Error)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn extension(&self) -> ExtensionPolicy {
        self.extension
    }

    pub fn with_extension(mut self, extension: ExtensionPolicy) -> MonotoneInterpolant {
        self.extension = extension;
        self
    }

    pub fn domain(&self) -> Interval {
        match self.extension {
            ExtensionPolicy::Error => Interval::new(self.nodes[0], *self.nodes.last().unwrap()),
            _ => Interval::REAL,
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let n = self.nodes.len();
        if x < self.nodes[0] || x > self.nodes[n - 1] {
            return match self.extension {
                ExtensionPolicy::Error => Err(Error::DomainViolation {
                    x,
                    domain: Interval::new(self.nodes[0], self.nodes[n - 1]),
                }),
                ExtensionPolicy::Clamp => Ok(if x < self.nodes[0] {
                    self.values[0]
                } else {
                    self.values[n - 1]
                }),
                ExtensionPolicy::AsymptoticLinearInLog => Ok(self.extend_log(x)),
            };
        }
        // partition_point returns the first node > x, so seg straddles x.
        let idx = self.nodes.partition_point(|&t| t <= x);
        if idx == 0 {
            return Ok(self.values[0]);
        }
        if idx == n {
            return Ok(self.values[n - 1]);
        }
        let (x0, x1) = (self.nodes[idx - 1], self.nodes[idx]);
        let (y0, y1) = (self.values[idx - 1], self.values[idx]);
        if x == x0 {
            return Ok(y0);
        }
        let t = (x - x0) / (x1 - x0);
        Ok(y0 + t * (y1 - y0))
    }

    fn extend_log(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        let (x0, x1, y0, y1) = if x < self.nodes[0] {
            (self.nodes[0], self.nodes[1], self.values[0], self.values[1])
        } else {
            (
                self.nodes[n - 2],
                self.nodes[n - 1],
                self.values[n - 2],
                self.values[n - 1],
            )
        };
        if x0 > 0.0 && x1 > 0.0 && x > 0.0 {
            let slope = (y1 - y0) / (x1.ln() - x0.ln());
            let base = if x < self.nodes[0] { y0 } else { y1 };
            let anchor = if x < self.nodes[0] { x0 } else { x1 };
            base + slope * (x.ln() - anchor.ln())
        } else {
            // No log structure available; fall back to the terminal segment.
            let slope = (y1 - y0) / (x1 - x0);
            let (anchor_x, anchor_y) = if x < self.nodes[0] { (x0, y0) } else { (x1, y1) };
            anchor_y + slope * (x - anchor_x)
        }
    }

    /// Inverse by exact inversion of the straddling linear segment.
    pub fn inverse_evaluate(&self, y: f64) -> Result<f64> {
        let n = self.values.len();
        let (first, last) = (self.values[0], self.values[n - 1]);
        let (lo, hi) = match self.direction {
            Direction::Increasing => (first, last),
            Direction::Decreasing => (last, first),
        };
        if y < lo || y > hi {
            return Err(Error::NotBracketed { y, lo, hi });
        }
        let idx = match self.direction {
            Direction::Increasing => self.values.partition_point(|&v| v <= y),
            Direction::Decreasing => self.values.partition_point(|&v| v >= y),
        };
        if idx == 0 {
            return Ok(self.nodes[0]);
        }
        if idx == n {
            return Ok(self.nodes[n - 1]);
        }
        let (y0, y1) = (self.values[idx - 1], self.values[idx]);
        let (x0, x1) = (self.nodes[idx - 1], self.nodes[idx]);
        if y == y0 {
            return Ok(x0);
        }
        let t = (y - y0) / (y1 - y0);
        Ok(x0 + t * (x1 - x0))
    }
}
