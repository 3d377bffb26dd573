use serde::{Deserialize, Serialize};

use crate::abel::PeriodicFunction;
use crate::error::{Error, Result};
use crate::funcalg::{Direction, ExtensionPolicy, Grid, MonotoneInterpolant, RealFunction};

/// Forward/backward orbit step cap. Maps whose displacement stays bounded
/// (rather than shrinking proportionally to x) need on the order of x_max
/// steps to cross the working domain, so the cap is sized for the full
/// [1e−6, 1e6] range rather than for geometric orbits only.
pub const MAX_ORBIT_STEPS: usize = 2_000_000;

/// Relative bracket width at which orbit-inverse bisections stop.
const INVERSE_REL_TOL: f64 = 1e-15;

/// Widest bracket the inverse search may expand to.
const BRACKET_CEILING: f64 = 1e12;
const BRACKET_FLOOR: f64 = 1e-12;

/// Seed profile on the fundamental domain (g(x₀), x₀], prescribing α there
/// as a strictly decreasing map onto [0, ω). Any strictly decreasing profile
/// yields a valid conjugacy; the choice is a gauge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedProfile {
    /// Linear in x: the default.
    Linear,
    /// Linear in ln x. For a linear map g = b·id this produces the exact
    /// closed-form gauge α(x) = ω·ln(x/x₀)/ln b instead of an interpolant.
    Log,
    /// Cubic smoothstep easing between the endpoints.
    Smoothstep,
    /// Explicit strictly decreasing samples covering [g(x₀), x₀] with
    /// values running from ω down to 0.
    Custom { nodes: Vec<f64>, values: Vec<f64> },
}

/// A triple (α, ω, g): α a decreasing map of (0, ∞) into ℝ with
/// α(g(x)) = α(x) + ω and the gauge normalization α(x₀) = 0.
///
/// α is stored as a seed profile on one fundamental domain and extended by
/// the orbit recursion α(x) = α(g∘ⁿ(x)) − nω (downward for x > x₀, upward
/// with g-inverse steps for x below the fundamental domain). For linear g
/// solved with the log profile, α is the exact closed form.
#[derive(Debug, Clone)]
pub struct AbelConjugacy {
    g: RealFunction,
    omega: f64,
    x0: f64,
    repr: AlphaRepr,
}

#[derive(Debug, Clone)]
enum AlphaRepr {
    /// α(x) = ω·(ln x − ln x₀)/ln slope, for g = slope·id with slope ∈ (0,1).
    LogLinear { slope: f64 },
    SeedOrbit {
        seed: MonotoneInterpolant,
        g_x0: f64,
    },
}

impl AbelConjugacy {
    /// Construct the Abel function for `g` with translation ω and gauge
    /// α(x₀) = 0.
    ///
    /// `g` must be strictly increasing with 0 < g(x) < x at the validation
    /// samples (cone-interior on the positive half-line).
    pub fn solve(
        g: RealFunction,
        omega: f64,
        x0: f64,
        profile: SeedProfile,
    ) -> Result<AbelConjugacy> {
        if !(omega > 0.0) {
            return Err(Error::Validation(format!("omega must be positive, got {omega}")));
        }
        if !(x0 > 0.0) || !x0.is_finite() {
            return Err(Error::Validation(format!("x0 must be positive, got {x0}")));
        }
        validate_cone_interior_increasing(&g)?;

        if let (SeedProfile::Log, Some(slope)) = (&profile, g.linear_slope()) {
            if slope > 0.0 && slope < 1.0 {
                return Ok(AbelConjugacy {
                    g,
                    omega,
                    x0,
                    repr: AlphaRepr::LogLinear { slope },
                });
            }
        }

        let g_x0 = g.evaluate(x0)?;
        if !(g_x0 > 0.0 && g_x0 < x0) {
            return Err(Error::Validation(format!(
                "g(x0) = {g_x0} must lie strictly between 0 and x0 = {x0}"
            )));
        }
        let seed = build_seed(&profile, g_x0, x0, omega)?;
        Ok(AbelConjugacy {
            g,
            omega,
            x0,
            repr: AlphaRepr::SeedOrbit { seed, g_x0 },
        })
    }

    pub fn g(&self) -> &RealFunction {
        &self.g
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn seed(&self) -> Option<&MonotoneInterpolant> {
        match &self.repr {
            AlphaRepr::SeedOrbit { seed, .. } => Some(seed),
            AlphaRepr::LogLinear { .. } => None,
        }
    }

    /// α(x).
    pub fn alpha(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Validation(format!(
                "Abel function evaluated at non-positive x = {x}"
            )));
        }
        match &self.repr {
            AlphaRepr::LogLinear { slope } => {
                Ok(self.omega * (x.ln() - self.x0.ln()) / slope.ln())
            }
            AlphaRepr::SeedOrbit { seed, g_x0 } => {
                if x > self.x0 {
                    // walk the forward orbit down into the fundamental domain
                    let mut y = x;
                    let mut n = 0usize;
                    while y > self.x0 {
                        y = self.g.evaluate(y)?;
                        n += 1;
                        if n > MAX_ORBIT_STEPS {
                            return Err(Error::IterationCap {
                                x,
                                cap: MAX_ORBIT_STEPS,
                            });
                        }
                    }
                    let y = y.clamp(*g_x0, self.x0);
                    Ok(seed.evaluate(y)? - n as f64 * self.omega)
                } else if x <= *g_x0 {
                    // lift with g-inverse steps
                    let mut y = x;
                    let mut n = 0usize;
                    while y <= *g_x0 {
                        y = self.g_inverse(y)?;
                        n += 1;
                        if n > MAX_ORBIT_STEPS {
                            return Err(Error::IterationCap {
                                x,
                                cap: MAX_ORBIT_STEPS,
                            });
                        }
                    }
                    let y = y.clamp(*g_x0, self.x0);
                    Ok(seed.evaluate(y)? + n as f64 * self.omega)
                } else {
                    seed.evaluate(x)
                }
            }
        }
    }

    /// α⁻¹(t), by bisection on α with a geometrically expanded bracket.
    pub fn alpha_inverse(&self, t: f64) -> Result<f64> {
        match &self.repr {
            AlphaRepr::LogLinear { slope } => {
                Ok(self.x0 * (t * slope.ln() / self.omega).exp())
            }
            AlphaRepr::SeedOrbit { .. } => {
                // α is decreasing with α(x0) = 0.
                let (mut lo, mut hi);
                if t <= 0.0 {
                    lo = self.x0;
                    hi = self.x0;
                    while self.alpha(hi)? > t {
                        lo = hi;
                        hi *= 2.0;
                        if hi > BRACKET_CEILING {
                            return Err(Error::NotBracketed {
                                y: t,
                                lo: self.alpha(BRACKET_CEILING / 2.0).unwrap_or(f64::NAN),
                                hi: 0.0,
                            });
                        }
                    }
                } else {
                    hi = self.x0;
                    lo = self.x0;
                    while self.alpha(lo)? < t {
                        hi = lo;
                        lo *= 0.5;
                        if lo < BRACKET_FLOOR {
                            return Err(Error::NotBracketed {
                                y: t,
                                lo: 0.0,
                                hi: self.alpha(BRACKET_FLOOR * 2.0).unwrap_or(f64::NAN),
                            });
                        }
                    }
                }
                let mut iter = 0usize;
                while hi - lo > INVERSE_REL_TOL * hi {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.alpha(mid)? > t {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    iter += 1;
                    if iter > 200 {
                        break;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// g⁻¹(y), structurally for linear maps, otherwise by bisection with an
    /// expanding bracket (g < id implies g⁻¹(y) > y).
    pub fn g_inverse(&self, y: f64) -> Result<f64> {
        if let Some(slope) = self.g.linear_slope() {
            return Ok(y / slope);
        }
        let mut hi = y;
        loop {
            hi *= 2.0;
            if self.g.evaluate(hi)? >= y {
                break;
            }
            if hi > BRACKET_CEILING {
                return Err(Error::NotBracketed {
                    y,
                    lo: y,
                    hi: BRACKET_CEILING,
                });
            }
        }
        let mut lo = y;
        let mut iter = 0usize;
        while hi - lo > INVERSE_REL_TOL * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.g.evaluate(mid)? < y {
                lo = mid;
            } else {
                hi = mid;
            }
            iter += 1;
            if iter > 200 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// h(x) = α⁻¹(P(α(x)) + α(x)). For the closed-form log gauge this is
    /// evaluated in the factored form x·bᴾ⁽ᵅ⁽ˣ⁾⁾ᐟω, which is exact for
    /// constant P up to one exp rounding.
    pub fn branch_value(&self, periodic: &PeriodicFunction, x: f64) -> Result<f64> {
        if x == 0.0 {
            // continuous extension: 0 < h(x) < x forces h(0⁺) → 0
            return Ok(0.0);
        }
        match &self.repr {
            AlphaRepr::LogLinear { slope } => {
                let u = self.alpha(x)?;
                let p = periodic.evaluate(u);
                Ok(x * (p * slope.ln() / self.omega).exp())
            }
            AlphaRepr::SeedOrbit { .. } => {
                let u = self.alpha(x)?;
                let p = periodic.evaluate(u);
                self.alpha_inverse(u + p)
            }
        }
    }

    /// |α(g(x)) − α(x) − ω| over the grid.
    pub fn abel_residual(&self, grid: &Grid) -> Result<crate::funcalg::ResidualReport> {
        crate::funcalg::residual_sweep(grid, false, |x| {
            let lhs = self.alpha(self.g.evaluate(x)?)?;
            let rhs = self.alpha(x)?;
            Ok(lhs - rhs - self.omega)
        })
    }
}

fn build_seed(
    profile: &SeedProfile,
    g_x0: f64,
    x0: f64,
    omega: f64,
) -> Result<MonotoneInterpolant> {
    match profile {
        SeedProfile::Linear => MonotoneInterpolant::new(
            vec![g_x0, x0],
            vec![omega, 0.0],
            Direction::Decreasing,
            ExtensionPolicy::Error,
        ),
        SeedProfile::Log => {
            let n = 65;
            let (la, lb) = (g_x0.ln(), x0.ln());
            let mut nodes = Vec::with_capacity(n);
            let mut values = Vec::with_capacity(n);
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                let l = la + (lb - la) * t;
                nodes.push(l.exp());
                values.push(omega * (1.0 - t));
            }
            nodes[0] = g_x0;
            nodes[n - 1] = x0;
            values[0] = omega;
            values[n - 1] = 0.0;
            MonotoneInterpolant::new(nodes, values, Direction::Decreasing, ExtensionPolicy::Error)
        }
        SeedProfile::Smoothstep => {
            let n = 65;
            let mut nodes = Vec::with_capacity(n);
            let mut values = Vec::with_capacity(n);
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                nodes.push(g_x0 + (x0 - g_x0) * t);
                let s = t * t * (3.0 - 2.0 * t);
                values.push(omega * (1.0 - s));
            }
            nodes[n - 1] = x0;
            values[0] = omega;
            values[n - 1] = 0.0;
            MonotoneInterpolant::new(nodes, values, Direction::Decreasing, ExtensionPolicy::Error)
        }
        SeedProfile::Custom { nodes, values } => {
            if nodes.first().copied() != Some(g_x0) || nodes.last().copied() != Some(x0) {
                return Err(Error::Validation(
                    "custom seed nodes must span exactly [g(x0), x0]".into(),
                ));
            }
            if values.first().copied() != Some(omega) || values.last().copied() != Some(0.0) {
                return Err(Error::Validation(
                    "custom seed values must run from omega down to 0".into(),
                ));
            }
            MonotoneInterpolant::new(
                nodes.clone(),
                values.clone(),
                Direction::Decreasing,
                ExtensionPolicy::Error,
            )
        }
    }
}

/// Spot-check that g is strictly increasing and strictly between 0 and id on
/// a log-spaced sample of the working domain.
fn validate_cone_interior_increasing(g: &RealFunction) -> Result<()> {
    let dom = g.domain();
    let lo = dom.lo.max(crate::funcalg::DOMAIN_MIN);
    let hi = dom.hi.min(crate::funcalg::DOMAIN_MAX);
    let grid = Grid::log_spaced(lo, hi, 257);
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid.points() {
        let y = g.evaluate(x).map_err(|e| e.at_grid_point(x))?;
        if !(y > 0.0 && y < x) {
            return Err(Error::Validation(format!(
                "g is not cone-interior at x = {x}: g(x) = {y}"
            )));
        }
        if let Some((px, py)) = prev {
            if y <= py {
                return Err(Error::Validation(format!(
                    "g is not strictly increasing between x = {px} and x = {x}"
                )));
            }
        }
        prev = Some((x, y));
    }
    Ok(())
}
