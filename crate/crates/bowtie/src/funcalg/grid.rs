use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalg::Interval;

/// Default working domain for half-line functions.
pub const DOMAIN_MIN: f64 = 1e-6;
pub const DOMAIN_MAX: f64 = 1e6;
/// Default number of sample points for log-spaced grids.
pub const GRID_POINTS: usize = 2048;

/// Default extent of residual-verification grids. Round-off in f64 grows
/// linearly with |x|, so residual grids stop at 1e4 where the tightest
/// verification tolerances are still meaningful.
pub const RESIDUAL_MAX: f64 = 1e4;

/// A finite strictly increasing list of sample abscissae.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grid {
    points: Vec<f64>,
    description: String,
}

impl Grid {
    pub fn from_points(points: Vec<f64>, description: impl Into<String>) -> Result<Grid> {
        if points.is_empty() {
            return Err(Error::Validation("grid must be nonempty".into()));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::NonMonotone { index: i });
            }
        }
        Ok(Grid {
            points,
            description: description.into(),
        })
    }

    /// `n` log-spaced points on [min, max], 0 < min < max.
    pub fn log_spaced(min: f64, max: f64, n: usize) -> Grid {
        assert!(min > 0.0 && min < max && n >= 2);
        let (a, b) = (min.ln(), max.ln());
        let mut points: Vec<f64> = (0..n)
            .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
            .collect();
        points[0] = min;
        points[n - 1] = max;
        points.dedup_by(|a, b| *a <= *b);
        Grid {
            points,
            description: format!("log[{min:e}, {max:e}] n={n}"),
        }
    }

    /// `n` linearly spaced points on [min, max].
    pub fn linear(min: f64, max: f64, n: usize) -> Grid {
        assert!(min < max && n >= 2);
        let mut points: Vec<f64> = (0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect();
        points[n - 1] = max;
        Grid {
            points,
            description: format!("linear[{min}, {max}] n={n}"),
        }
    }

    /// Positive log grid, its exact negation, and 0. The negative points are
    /// bitwise negations of the positive ones, so the grid is symmetric.
    pub fn symmetric_log(min: f64, max: f64, n: usize) -> Grid {
        let pos = Grid::log_spaced(min, max, n);
        let mut points: Vec<f64> = pos.points.iter().rev().map(|x| -x).collect();
        points.push(0.0);
        points.extend_from_slice(&pos.points);
        Grid {
            points,
            description: format!("symmetric log[{min:e}, {max:e}] n={n} per side"),
        }
    }

    /// Default positive grid for residual verification.
    pub fn default_positive() -> Grid {
        Grid::log_spaced(DOMAIN_MIN, RESIDUAL_MAX, GRID_POINTS)
    }

    /// Default negative grid (mirror of the positive one).
    pub fn default_negative() -> Grid {
        let pos = Grid::default_positive();
        let points: Vec<f64> = pos.points.iter().rev().map(|x| -x).collect();
        Grid {
            points,
            description: "mirror of default positive grid".into(),
        }
    }

    /// Default full-line grid for equation residuals.
    pub fn default_symmetric() -> Grid {
        Grid::symmetric_log(DOMAIN_MIN, RESIDUAL_MAX, GRID_POINTS)
    }

    /// Wide positive grid spanning the full working domain.
    pub fn working_positive() -> Grid {
        Grid::log_spaced(DOMAIN_MIN, DOMAIN_MAX, GRID_POINTS)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same abscissae negated, preserving the increasing order.
    pub fn reflected(&self) -> Grid {
        let points: Vec<f64> = self.points.iter().rev().map(|x| -x).collect();
        Grid {
            points,
            description: format!("reflection of {}", self.description),
        }
    }

    pub fn check_within(&self, interval: &Interval) -> Result<()> {
        for &x in &self.points {
            if !interval.contains(x) {
                return Err(Error::DomainViolation {
                    x,
                    domain: *interval,
                });
            }
        }
        Ok(())
    }
}
