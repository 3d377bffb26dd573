use std::sync::Arc;

use crate::abel::{AbelConjugacy, PeriodicFunction};
use crate::error::{Error, Result};
use crate::funcalg::{Interval, MonotoneInterpolant};

/// An evaluable real map on an interval; the universal currency of the
/// toolkit.
///
/// Conjugation by −id and the displacement map are represented structurally.
/// Together with the rewrite rules in [`RealFunction::conjugate_neg`] and
/// [`RealFunction::displacement`], this makes the identities
/// (g^{−id})^{−id} = g and (id − g)^{−id} = id − g^{−id} hold exactly in
/// floating point, not merely up to rounding.
#[derive(Debug, Clone)]
pub struct RealFunction {
    domain: Interval,
    body: Body,
}

#[derive(Clone)]
pub enum Body {
    /// x ↦ slope·x.
    Linear { slope: f64 },
    /// x ↦ x².
    Square,
    /// x ↦ x/(2−x), a strictly increasing bow-tie interior map on ℝ₋.
    RationalNeg,
    /// x ↦ x·(slope + amplitude·sin(ln|x|)), 0 at 0. The canonical
    /// cone-interior non-solution family.
    SinLogSlope { slope: f64, amplitude: f64 },
    Interpolant(MonotoneInterpolant),
    /// Pair split at 0: `neg` on ℝ₋, `pos` on ℝ₊.
    Piecewise {
        neg: Box<RealFunction>,
        pos: Box<RealFunction>,
    },
    /// outer ∘ inner.
    Composite {
        outer: Box<RealFunction>,
        inner: Box<RealFunction>,
    },
    /// x ↦ −g(−x).
    ConjNeg(Box<RealFunction>),
    /// x ↦ x − g(x).
    Displacement(Box<RealFunction>),
    /// x ↦ α⁻¹(P(α(x)) + α(x)) over an Abel conjugacy.
    AbelBranch {
        conjugacy: Arc<AbelConjugacy>,
        periodic: PeriodicFunction,
    },
    /// Escape hatch for closed forms without a dedicated tag (test oracles,
    /// perturbation studies). Not serializable.
    Custom {
        label: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for Body {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Body::Linear { slope } => write!(f, "Linear({slope})"),
            Body::Square => write!(f, "Square"),
            Body::RationalNeg => write!(f, "RationalNeg"),
            Body::SinLogSlope { slope, amplitude } => {
                write!(f, "SinLogSlope({slope}, {amplitude})")
            }
            Body::Interpolant(i) => write!(f, "Interpolant({} nodes)", i.nodes().len()),
            Body::Piecewise { neg, pos } => write!(f, "Piecewise({neg:?}, {pos:?})"),
            Body::Composite { outer, inner } => write!(f, "Composite({outer:?} ∘ {inner:?})"),
            Body::ConjNeg(g) => write!(f, "ConjNeg({g:?})"),
            Body::Displacement(g) => write!(f, "Displacement({g:?})"),
            Body::AbelBranch { .. } => write!(f, "AbelBranch"),
            Body::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

impl RealFunction {
    pub fn new(domain: Interval, body: Body) -> RealFunction {
        RealFunction { domain, body }
    }

    pub fn linear(slope: f64) -> RealFunction {
        RealFunction::new(Interval::REAL, Body::Linear { slope })
    }

    pub fn identity() -> RealFunction {
        RealFunction::linear(1.0)
    }

    pub fn square() -> RealFunction {
        RealFunction::new(Interval::REAL, Body::Square)
    }

    pub fn rational_neg() -> RealFunction {
        RealFunction::new(Interval::NEG, Body::RationalNeg)
    }

    pub fn sin_log_slope(slope: f64, amplitude: f64) -> RealFunction {
        RealFunction::new(Interval::REAL, Body::SinLogSlope { slope, amplitude })
    }

    pub fn interpolant(interp: MonotoneInterpolant) -> RealFunction {
        let domain = interp.domain();
        RealFunction::new(domain, Body::Interpolant(interp))
    }

    pub fn custom(
        label: impl Into<String>,
        domain: Interval,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> RealFunction {
        RealFunction::new(
            domain,
            Body::Custom {
                label: label.into(),
                f: Arc::new(f),
            },
        )
    }

    /// Pair split at 0. When both pieces are defined at 0 their values must
    /// agree there.
    pub fn piecewise(neg: RealFunction, pos: RealFunction) -> Result<RealFunction> {
        if neg.domain.contains(0.0) && pos.domain.contains(0.0) {
            let vn = neg.evaluate(0.0)?;
            let vp = pos.evaluate(0.0)?;
            if vn != vp {
                return Err(Error::Validation(format!(
                    "piecewise pieces disagree at 0: {vn} vs {vp}"
                )));
            }
        }
        let domain = Interval::new(neg.domain.lo.min(0.0), pos.domain.hi.max(0.0));
        Ok(RealFunction::new(
            domain,
            Body::Piecewise {
                neg: Box::new(neg),
                pos: Box::new(pos),
            },
        ))
    }

    pub fn compose(outer: RealFunction, inner: RealFunction) -> RealFunction {
        let domain = inner.domain;
        RealFunction::new(
            domain,
            Body::Composite {
                outer: Box::new(outer),
                inner: Box::new(inner),
            },
        )
    }

    pub fn abel_branch(conjugacy: Arc<AbelConjugacy>, periodic: PeriodicFunction) -> RealFunction {
        RealFunction::new(
            Interval::X,
            Body::AbelBranch {
                conjugacy,
                periodic,
            },
        )
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    /// Narrow the domain without touching the body. For a piecewise pair
    /// restricted to one half-line the corresponding piece is extracted, so
    /// the restriction evaluates through exactly the same code path as the
    /// original did on that side.
    pub fn restrict(&self, interval: Interval) -> RealFunction {
        if let Body::Piecewise { neg, pos } = &self.body {
            if interval.hi <= 0.0 {
                return neg.restrict(interval);
            }
            if interval.lo >= 0.0 {
                return pos.restrict(interval);
            }
        }
        RealFunction::new(self.domain.intersect(&interval), self.body.clone())
    }

    /// Restriction to the non-positive half-line (g₋).
    pub fn restrict_neg(&self) -> RealFunction {
        self.restrict(Interval::NEG)
    }

    /// Restriction to the non-negative half-line (g₊).
    pub fn restrict_pos(&self) -> RealFunction {
        self.restrict(Interval::POS)
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::DomainViolation {
                x,
                domain: self.domain,
            });
        }
        let y = self.eval_body(x)?;
        if !y.is_finite() {
            return Err(Error::NonFinite {
                x,
                context: "function body",
            });
        }
        Ok(y)
    }

    fn eval_body(&self, x: f64) -> Result<f64> {
        match &self.body {
            Body::Linear { slope } => Ok(slope * x),
            Body::Square => Ok(x * x),
            Body::RationalNeg => Ok(x / (2.0 - x)),
            Body::SinLogSlope { slope, amplitude } => {
                if x == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(x * (slope + amplitude * x.abs().ln().sin()))
                }
            }
            Body::Interpolant(interp) => interp.evaluate(x),
            Body::Piecewise { neg, pos } => {
                if x < 0.0 {
                    neg.evaluate(x)
                } else if x > 0.0 {
                    pos.evaluate(x)
                } else if pos.domain().contains(0.0) {
                    pos.evaluate(0.0)
                } else {
                    neg.evaluate(0.0)
                }
            }
            Body::Composite { outer, inner } => outer.evaluate(inner.evaluate(x)?),
            Body::ConjNeg(g) => Ok(-(g.evaluate(-x)?)),
            Body::Displacement(g) => Ok(x - g.evaluate(x)?),
            Body::AbelBranch {
                conjugacy,
                periodic,
            } => conjugacy.branch_value(periodic, x),
            Body::Custom { f, .. } => Ok(f(x)),
        }
    }

    /// The conjugate x ↦ −g(−x) on the reflected domain.
    ///
    /// Rewrites: double conjugation unwraps, conjugation passes through
    /// displacements and swaps piecewise halves, and odd closed forms map to
    /// themselves. All rewrites are exact pointwise.
    pub fn conjugate_neg(&self) -> RealFunction {
        match &self.body {
            Body::ConjNeg(g) => (**g).clone(),
            Body::Linear { .. } | Body::SinLogSlope { .. } => {
                RealFunction::new(self.domain.reflected(), self.body.clone())
            }
            Body::Displacement(g) => g.conjugate_neg().displacement(),
            Body::Piecewise { neg, pos } => RealFunction::new(
                self.domain.reflected(),
                Body::Piecewise {
                    neg: Box::new(pos.conjugate_neg()),
                    pos: Box::new(neg.conjugate_neg()),
                },
            ),
            _ => RealFunction::new(
                self.domain.reflected(),
                Body::ConjNeg(Box::new(self.clone())),
            ),
        }
    }

    /// The displacement map id − g.
    ///
    /// A double displacement unwraps to the original function, and the map
    /// distributes over piecewise pairs; both rewrites are exact pointwise.
    pub fn displacement(&self) -> RealFunction {
        match &self.body {
            Body::Displacement(g) => (**g).clone(),
            Body::Piecewise { neg, pos } => RealFunction::new(
                self.domain,
                Body::Piecewise {
                    neg: Box::new(neg.displacement()),
                    pos: Box::new(pos.displacement()),
                },
            ),
            _ => RealFunction::new(self.domain, Body::Displacement(Box::new(self.clone()))),
        }
    }

    /// Structural slope, if this function is recognizably linear.
    pub fn linear_slope(&self) -> Option<f64> {
        match &self.body {
            Body::Linear { slope } => Some(*slope),
            Body::ConjNeg(g) => g.linear_slope(),
            Body::Displacement(g) => g.linear_slope().map(|a| 1.0 - a),
            _ => None,
        }
    }
}

/// Solve f(x) = y on `bracket` by bisection. Ties break at the midpoint;
/// iteration stops once the bracket width drops below `tol`.
pub fn inverse_evaluate(
    f: &RealFunction,
    y: f64,
    bracket: Interval,
    tol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let flo = f.evaluate(lo)?;
    let fhi = f.evaluate(hi)?;
    let increasing = fhi > flo;
    let (ymin, ymax) = if increasing { (flo, fhi) } else { (fhi, flo) };
    if y < ymin || y > ymax {
        return Err(Error::NotBracketed {
            y,
            lo: ymin,
            hi: ymax,
        });
    }
    let mut guard = 0usize;
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket exhausted at f64 resolution
        }
        let fmid = f.evaluate(mid)?;
        if fmid < ymin - tol.max(1e-300) * ymin.abs().max(1.0)
            || fmid > ymax + tol.max(1e-300) * ymax.abs().max(1.0)
        {
            return Err(Error::NonMonotone { index: guard });
        }
        let go_right = if increasing { fmid < y } else { fmid > y };
        if go_right {
            lo = mid;
        } else {
            hi = mid;
        }
        guard += 1;
        if guard > 20_000 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
