use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A period-ω map ℝ → ℝ: either a constant plus a finite trigonometric
/// series, or one period of samples with wrap-around linear interpolation.
///
/// Arguments are reduced modulo the period before evaluation, so periodicity
/// holds exactly by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicFunction {
    period: f64,
    #[serde(flatten)]
    body: PeriodicBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PeriodicBody {
    Trig {
        constant: f64,
        #[serde(default)]
        cos_coeffs: Vec<f64>,
        #[serde(default)]
        sin_coeffs: Vec<f64>,
    },
    Samples { samples: Vec<f64> },
}

/// Sample count used when certifying positivity.
pub const POSITIVITY_SAMPLES: usize = 4096;

impl PeriodicFunction {
    pub fn constant(period: f64, value: f64) -> PeriodicFunction {
        PeriodicFunction {
            period,
            body: PeriodicBody::Trig {
                constant: value,
                cos_coeffs: vec![],
                sin_coeffs: vec![],
            },
        }
    }

    /// constant + Σₖ cos_coeffs[k]·cos(2π(k+1)u/ω) + sin_coeffs[k]·sin(…).
    pub fn trig(
        period: f64,
        constant: f64,
        cos_coeffs: Vec<f64>,
        sin_coeffs: Vec<f64>,
    ) -> Result<PeriodicFunction> {
        if !(period > 0.0) {
            return Err(Error::Validation(format!("period must be positive, got {period}")));
        }
        Ok(PeriodicFunction {
            period,
            body: PeriodicBody::Trig {
                constant,
                cos_coeffs,
                sin_coeffs,
            },
        })
    }

    /// One period of samples at uᵢ = i·ω/n, interpolated linearly with
    /// wrap-around.
    pub fn from_samples(period: f64, samples: Vec<f64>) -> Result<PeriodicFunction> {
        if !(period > 0.0) {
            return Err(Error::Validation(format!("period must be positive, got {period}")));
        }
        if samples.len() < 2 {
            return Err(Error::Validation(
                "periodic sample table needs at least 2 entries".into(),
            ));
        }
        Ok(PeriodicFunction {
            period,
            body: PeriodicBody::Samples { samples },
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn body(&self) -> &PeriodicBody {
        &self.body
    }

    pub fn evaluate(&self, u: f64) -> f64 {
        let r = u.rem_euclid(self.period);
        match &self.body {
            PeriodicBody::Trig {
                constant,
                cos_coeffs,
                sin_coeffs,
            } => {
                let mut v = *constant;
                let base = 2.0 * PI * r / self.period;
                for (k, c) in cos_coeffs.iter().enumerate() {
                    v += c * ((k + 1) as f64 * base).cos();
                }
                for (k, s) in sin_coeffs.iter().enumerate() {
                    v += s * ((k + 1) as f64 * base).sin();
                }
                v
            }
            PeriodicBody::Samples { samples } => {
                let n = samples.len();
                let pos = r / self.period * n as f64;
                let i = (pos.floor() as usize).min(n - 1);
                let t = pos - i as f64;
                let a = samples[i];
                let b = samples[(i + 1) % n];
                a + t * (b - a)
            }
        }
    }

    /// Certified minimum over a period: dense sampling padded by a Lipschitz
    /// bound, so a certificate > 0 guarantees positivity everywhere.
    /// For sample tables the piecewise-linear minimum is attained at the
    /// table entries and the certificate is exact.
    pub fn certified_min(&self) -> f64 {
        match &self.body {
            PeriodicBody::Trig {
                constant: _,
                cos_coeffs,
                sin_coeffs,
            } => {
                let mut min = f64::INFINITY;
                let h = self.period / POSITIVITY_SAMPLES as f64;
                for i in 0..POSITIVITY_SAMPLES {
                    min = min.min(self.evaluate(i as f64 * h));
                }
                let mut lipschitz = 0.0;
                for (k, c) in cos_coeffs.iter().enumerate() {
                    lipschitz += 2.0 * PI * (k + 1) as f64 / self.period * c.abs();
                }
                for (k, s) in sin_coeffs.iter().enumerate() {
                    lipschitz += 2.0 * PI * (k + 1) as f64 / self.period * s.abs();
                }
                min - 0.5 * lipschitz * h
            }
            PeriodicBody::Samples { samples } => {
                samples.iter().fold(f64::INFINITY, |m, &v| m.min(v))
            }
        }
    }

    pub fn certify_positive(&self) -> bool {
        self.certified_min() > 0.0
    }
}
