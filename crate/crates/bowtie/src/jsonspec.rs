//! JSON wire format for functions, grids and conjugacies: a tagged spec
//! tree that reconstructs `RealFunction` values node-wise identically.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abel::{AbelConjugacy, PeriodicFunction, SeedProfile};
use crate::error::{Error, Result};
use crate::funcalg::{Body, ExtensionPolicy, Grid, MonotoneInterpolant, RealFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Linear(LinearSpec),
    PiecewiseLinearSlopes(PiecewiseLinearSlopesSpec),
    RationalNeg(EmptySpec),
    Square(EmptySpec),
    SinLogSlope(SinLogSlopeSpec),
    Interpolant(InterpolantSpec),
    Piecewise(PiecewiseSpec),
    Composite(CompositeSpec),
    ConjugateNeg(WrapSpec),
    Displacement(WrapSpec),
    AbelBranch(AbelBranchSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSpec {
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseLinearSlopesSpec {
    pub neg_slope: f64,
    pub pos_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmptySpec {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SinLogSlopeSpec {
    pub slope: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionSpec {
    #[default]
    Error,
    Clamp,
    AsymptoticLinearInLog,
}

impl From<ExtensionSpec> for ExtensionPolicy {
    fn from(e: ExtensionSpec) -> ExtensionPolicy {
        match e {
            ExtensionSpec::Error => ExtensionPolicy::Error,
            ExtensionSpec::Clamp => ExtensionPolicy::Clamp,
            ExtensionSpec::AsymptoticLinearInLog => ExtensionPolicy::AsymptoticLinearInLog,
        }
    }
}

impl From<ExtensionPolicy> for ExtensionSpec {
    fn from(e: ExtensionPolicy) -> ExtensionSpec {
        match e {
            ExtensionPolicy::Error => ExtensionSpec::Error,
            ExtensionPolicy::Clamp => ExtensionSpec::Clamp,
            ExtensionPolicy::AsymptoticLinearInLog => ExtensionSpec::AsymptoticLinearInLog,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolantSpec {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default)]
    pub extension: ExtensionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseSpec {
    pub neg: Box<FunctionSpec>,
    pub pos: Box<FunctionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeSpec {
    pub outer: Box<FunctionSpec>,
    pub inner: Box<FunctionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrapSpec {
    pub inner: Box<FunctionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelBranchSpec {
    pub conjugacy: ConjugacySpec,
    pub periodic: PeriodicFunction,
}

/// Conjugacy wire format: the seed interpolant plus the generating map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugacySpec {
    pub x0: f64,
    pub omega: f64,
    pub seed_nodes: Vec<f64>,
    pub seed_values: Vec<f64>,
    pub g_spec: Box<FunctionSpec>,
}

impl FunctionSpec {
    pub fn to_function(&self) -> Result<RealFunction> {
        match self {
            FunctionSpec::Linear(s) => Ok(RealFunction::linear(s.slope)),
            FunctionSpec::PiecewiseLinearSlopes(s) => RealFunction::piecewise(
                RealFunction::linear(s.neg_slope),
                RealFunction::linear(s.pos_slope),
            ),
            FunctionSpec::RationalNeg(_) => Ok(RealFunction::rational_neg()),
            FunctionSpec::Square(_) => Ok(RealFunction::square()),
            FunctionSpec::SinLogSlope(s) => Ok(RealFunction::sin_log_slope(s.slope, s.amplitude)),
            FunctionSpec::Interpolant(s) => {
                let increasing = s.values.last() > s.values.first();
                let interp = MonotoneInterpolant::new(
                    s.nodes.clone(),
                    s.values.clone(),
                    if increasing {
                        crate::funcalg::Direction::Increasing
                    } else {
                        crate::funcalg::Direction::Decreasing
                    },
                    s.extension.into(),
                )?;
                Ok(RealFunction::interpolant(interp))
            }
            FunctionSpec::Piecewise(s) => {
                RealFunction::piecewise(s.neg.to_function()?, s.pos.to_function()?)
            }
            FunctionSpec::Composite(s) => Ok(RealFunction::compose(
                s.outer.to_function()?,
                s.inner.to_function()?,
            )),
            FunctionSpec::ConjugateNeg(s) => Ok(s.inner.to_function()?.conjugate_neg()),
            FunctionSpec::Displacement(s) => Ok(s.inner.to_function()?.displacement()),
            FunctionSpec::AbelBranch(s) => {
                let c = Arc::new(s.conjugacy.to_conjugacy()?);
                crate::abel::build_branch(&c, &s.periodic)
            }
        }
    }

    pub fn from_function(f: &RealFunction) -> Result<FunctionSpec> {
        Ok(match f.body() {
            Body::Linear { slope } => FunctionSpec::Linear(LinearSpec { slope: *slope }),
            Body::Square => FunctionSpec::Square(EmptySpec {}),
            Body::RationalNeg => FunctionSpec::RationalNeg(EmptySpec {}),
            Body::SinLogSlope { slope, amplitude } => FunctionSpec::SinLogSlope(SinLogSlopeSpec {
                slope: *slope,
                amplitude: *amplitude,
            }),
            Body::Interpolant(i) => FunctionSpec::Interpolant(InterpolantSpec {
                nodes: i.nodes().to_vec(),
                values: i.values().to_vec(),
                extension: i.extension().into(),
            }),
            Body::Piecewise { neg, pos } => {
                if let (Body::Linear { slope: a }, Body::Linear { slope: b }) =
                    (neg.body(), pos.body())
                {
                    FunctionSpec::PiecewiseLinearSlopes(PiecewiseLinearSlopesSpec {
                        neg_slope: *a,
                        pos_slope: *b,
                    })
                } else {
                    FunctionSpec::Piecewise(PiecewiseSpec {
                        neg: Box::new(FunctionSpec::from_function(neg)?),
                        pos: Box::new(FunctionSpec::from_function(pos)?),
                    })
                }
            }
            Body::Composite { outer, inner } => FunctionSpec::Composite(CompositeSpec {
                outer: Box::new(FunctionSpec::from_function(outer)?),
                inner: Box::new(FunctionSpec::from_function(inner)?),
            }),
            Body::ConjNeg(g) => FunctionSpec::ConjugateNeg(WrapSpec {
                inner: Box::new(FunctionSpec::from_function(g)?),
            }),
            Body::Displacement(g) => FunctionSpec::Displacement(WrapSpec {
                inner: Box::new(FunctionSpec::from_function(g)?),
            }),
            Body::AbelBranch {
                conjugacy,
                periodic,
            } => FunctionSpec::AbelBranch(AbelBranchSpec {
                conjugacy: ConjugacySpec::from_conjugacy(conjugacy)?,
                periodic: periodic.clone(),
            }),
            Body::Custom { label, .. } => {
                return Err(Error::Validation(format!(
                    "custom function '{label}' has no wire representation"
                )))
            }
        })
    }
}

impl ConjugacySpec {
    pub fn to_conjugacy(&self) -> Result<AbelConjugacy> {
        let g = self.g_spec.to_function()?;
        AbelConjugacy::solve(
            g,
            self.omega,
            self.x0,
            SeedProfile::Custom {
                nodes: self.seed_nodes.clone(),
                values: self.seed_values.clone(),
            },
        )
    }

    pub fn from_conjugacy(c: &AbelConjugacy) -> Result<ConjugacySpec> {
        let g_spec = Box::new(FunctionSpec::from_function(c.g())?);
        let (seed_nodes, seed_values) = match c.seed() {
            Some(seed) => (seed.nodes().to_vec(), seed.values().to_vec()),
            None => {
                // closed-form gauge: emit its exact values on a log-spaced
                // seed over the fundamental domain, dense enough that the
                // piecewise-linear reading stays within 1e-9 of the curve
                let n = 8193;
                let g_x0 = c.g().evaluate(c.x0())?;
                let (la, lb) = (g_x0.ln(), c.x0().ln());
                let mut nodes = Vec::with_capacity(n);
                let mut values = Vec::with_capacity(n);
                for i in 0..n {
                    let t = i as f64 / (n - 1) as f64;
                    nodes.push((la + (lb - la) * t).exp());
                    values.push(c.omega() * (1.0 - t));
                }
                nodes[0] = g_x0;
                nodes[n - 1] = c.x0();
                values[0] = c.omega();
                values[n - 1] = 0.0;
                (nodes, values)
            }
        };
        Ok(ConjugacySpec {
            x0: c.x0(),
            omega: c.omega(),
            seed_nodes,
            seed_values,
            g_spec,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpacingSpec {
    Log,
    Linear,
    SymmetricLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: SpacingSpec,
}

impl GridSpec {
    pub fn to_grid(&self) -> Result<Grid> {
        if self.points < 2 || !(self.min < self.max) {
            return Err(Error::Validation(format!(
                "invalid grid spec: min {}, max {}, points {}",
                self.min, self.max, self.points
            )));
        }
        match self.spacing {
            SpacingSpec::Linear => Ok(Grid::linear(self.min, self.max, self.points)),
            SpacingSpec::Log | SpacingSpec::SymmetricLog => {
                if !(self.min > 0.0) {
                    return Err(Error::Validation(
                        "log-spaced grids need a positive minimum".into(),
                    ));
                }
                Ok(match self.spacing {
                    SpacingSpec::Log => Grid::log_spaced(self.min, self.max, self.points),
                    _ => Grid::symmetric_log(self.min, self.max, self.points),
                })
            }
        }
    }
}
