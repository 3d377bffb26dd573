//! Abel-equation conjugacies and the periodic-displacement representation of
//! commuting branches: solving α(g(x)) = α(x) + ω, building branches
//! h = α⁻¹(P∘α + α), extracting the periodic displacement of a given branch,
//! and assembling full candidates from a prescribed negative branch and a
//! positive periodic displacement.

mod conjugacy;
mod periodic;

pub use conjugacy::{AbelConjugacy, SeedProfile, MAX_ORBIT_STEPS};
pub use periodic::{PeriodicBody, PeriodicFunction, POSITIVITY_SAMPLES};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcalg::{
    commutator_residual_traced, residual_sweep, Grid, RealFunction, ResidualReport,
};
use crate::solutions::{CandidateSolution, Generator, Provenance};

/// Default translation constant for solved conjugacies.
pub const DEFAULT_OMEGA: f64 = 1.0;
/// Default gauge base point with α(x₀) = 0.
pub const DEFAULT_X0: f64 = 1.0;

/// Solve the Abel equation for `g` with the given translation, base point
/// and seed profile.
pub fn solve_abel(
    g: RealFunction,
    omega: f64,
    x0: f64,
    profile: SeedProfile,
) -> Result<AbelConjugacy> {
    AbelConjugacy::solve(g, omega, x0, profile)
}

/// Recover g from the conjugacy alone: x ↦ α⁻¹(α(x) + ω).
///
/// Deliberately evaluated through α and its inverse rather than by reusing
/// the stored g, so comparing against g exercises the conjugacy.
pub fn reconstruct_g(c: &Arc<AbelConjugacy>) -> RealFunction {
    RealFunction::abel_branch(
        Arc::clone(c),
        PeriodicFunction::constant(c.omega(), c.omega()),
    )
}

/// h(x) = α⁻¹(P(α(x)) + α(x)) on the positive half-line. P must have period
/// ω; every such h commutes with g.
pub fn build_branch(c: &Arc<AbelConjugacy>, periodic: &PeriodicFunction) -> Result<RealFunction> {
    if periodic.period() != c.omega() {
        return Err(Error::PeriodMismatch {
            expected: c.omega(),
            found: periodic.period(),
        });
    }
    if let PeriodicBody::Trig {
        constant,
        cos_coeffs,
        sin_coeffs,
    } = periodic.body()
    {
        if cos_coeffs.is_empty() && sin_coeffs.is_empty() && *constant == c.omega() {
            // α⁻¹(α(x) + ω) = g(x): returning g itself keeps this identity
            // exact and preserves g's structure for later rewrites
            return Ok(c.g().restrict_pos());
        }
    }
    Ok(RealFunction::abel_branch(Arc::clone(c), periodic.clone()))
}

/// Sample the periodic displacement of h in the gauge of c:
/// P(u) = α(h(α⁻¹(u))) − u over one period, together with the periodicity
/// defect sup |P(u + ω) − P(u)|, which vanishes exactly when [g, h] = 0.
pub fn extract_periodic(
    h: &RealFunction,
    c: &AbelConjugacy,
    samples: usize,
) -> Result<(PeriodicFunction, ResidualReport)> {
    if samples < 2 {
        return Err(Error::Validation(
            "periodic extraction needs at least 2 samples".into(),
        ));
    }
    let omega = c.omega();
    let raw = |u: f64| -> Result<f64> {
        let x = c.alpha_inverse(u)?;
        let y = h.evaluate(x)?;
        if !(y > 0.0) {
            return Err(Error::NonFinite {
                x,
                context: "branch left the positive half-line during extraction".into(),
            });
        }
        Ok(c.alpha(y)? - u)
    };
    let mut values = Vec::with_capacity(samples);
    for j in 0..samples {
        let u = j as f64 * omega / samples as f64;
        values.push(raw(u)?);
    }
    let periodic = PeriodicFunction::from_samples(omega, values)?;

    let m = samples.min(257);
    let test = Grid::linear(0.0, omega * (m as f64 - 1.0) / m as f64, m);
    let report = residual_sweep(&test, true, |u| Ok(raw(u + omega)? - raw(u)?))?;
    Ok((periodic, report))
}

/// Relative tolerance for declaring h(x) = x at a refined point.
const FIXED_POINT_TOL: f64 = 1e-7;
/// |P| threshold for a periodic zero, relative to max(ω, 1).
const PERIODIC_ZERO_TOL: f64 = 1e-6;
/// Circular matching tolerance between α(fixed point) mod ω and a zero of P,
/// as a fraction of ω.
const MATCH_TOL_FRACTION: f64 = 1e-2;

/// Pairing of the fixed points of h with the zeros of its periodic
/// displacement through α.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FixedZeroReport {
    /// x > 0 with h(x) = x, localized from the grid.
    pub fixed_points: Vec<f64>,
    /// u in [0, ω) with P(u) = 0, localized from a dense period sample.
    pub periodic_zeros: Vec<f64>,
    /// (fixed point, matched zero) pairs under α mod ω.
    pub matched: Vec<(f64, f64)>,
    pub unmatched_fixed: Vec<f64>,
    pub unmatched_zeros: Vec<f64>,
}

/// Locate fixed points of h on the grid and zeros of the extracted periodic
/// displacement, and pair them via u = α(x) mod ω.
pub fn fixed_zero_correspondence(
    h: &RealFunction,
    c: &AbelConjugacy,
    grid: &Grid,
) -> Result<FixedZeroReport> {
    let omega = c.omega();
    let d = |x: f64| -> Result<f64> { Ok(h.evaluate(x)? - x) };

    let mut fixed_points: Vec<f64> = Vec::new();
    let push_fixed = |x: f64, fixed_points: &mut Vec<f64>| {
        let near = fixed_points
            .last()
            .is_some_and(|&p| (x - p).abs() <= 1e-9 * x.abs().max(1.0));
        if !near {
            fixed_points.push(x);
        }
    };
    let pts = grid.points();
    let vals: Vec<f64> = pts.iter().map(|&x| d(x)).collect::<Result<_>>()?;
    for i in 0..pts.len() {
        let tol = FIXED_POINT_TOL * pts[i].abs().max(1.0);
        if vals[i].abs() <= tol {
            push_fixed(pts[i], &mut fixed_points);
            continue;
        }
        if i + 1 < pts.len() && vals[i] * vals[i + 1] < 0.0 {
            // sign change: bisect
            let (mut lo, mut hi) = (pts[i], pts[i + 1]);
            let mut flo = vals[i];
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = d(mid)?;
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            push_fixed(0.5 * (lo + hi), &mut fixed_points);
        } else if i > 0 && i + 1 < pts.len() && vals[i].abs() < vals[i - 1].abs()
            && vals[i].abs() < vals[i + 1].abs()
        {
            // interior minimum of |d|: refine by ternary search, accept only
            // if the refined defect is below tolerance (touching fixed point)
            let (mut lo, mut hi) = (pts[i - 1], pts[i + 1]);
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if m1 >= m2 {
                    break;
                }
                if d(m1)?.abs() < d(m2)?.abs() {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let x = 0.5 * (lo + hi);
            if d(x)?.abs() <= FIXED_POINT_TOL * x.abs().max(1.0) {
                push_fixed(x, &mut fixed_points);
            }
        }
    }

    let (periodic, _) = extract_periodic(h, c, POSITIVITY_SAMPLES)?;
    let mut periodic_zeros: Vec<f64> = Vec::new();
    let zero_tol = PERIODIC_ZERO_TOL * omega.max(1.0);
    let n = POSITIVITY_SAMPLES;
    let mut best_in_cluster: Option<(f64, f64)> = None;
    for j in 0..=n {
        let u = (j % n) as f64 * omega / n as f64;
        let p = periodic.evaluate(u);
        if p.abs() <= zero_tol {
            best_in_cluster = match best_in_cluster {
                Some((bu, bp)) if bp <= p.abs() => Some((bu, bp)),
                _ => Some((u, p.abs())),
            };
        } else if let Some((bu, _)) = best_in_cluster.take() {
            periodic_zeros.push(bu);
        }
    }
    if let Some((bu, _)) = best_in_cluster {
        if !periodic_zeros.contains(&bu) {
            periodic_zeros.push(bu);
        }
    }
    periodic_zeros.sort_by(f64::total_cmp);

    let mut matched = Vec::new();
    let mut unmatched_fixed = Vec::new();
    let mut used = vec![false; periodic_zeros.len()];
    let match_tol = MATCH_TOL_FRACTION * omega;
    for &x in &fixed_points {
        let u = c.alpha(x)?.rem_euclid(omega);
        let mut best: Option<(usize, f64)> = None;
        for (k, &z) in periodic_zeros.iter().enumerate() {
            let raw = (u - z).abs();
            let dist = raw.min(omega - raw);
            if best.is_none_or(|(_, bd)| dist < bd) {
                best = Some((k, dist));
            }
        }
        match best {
            Some((k, dist)) if dist <= match_tol => {
                used[k] = true;
                matched.push((x, periodic_zeros[k]));
            }
            // the zero set may be a whole interval that clustering collapsed
            // to one representative, so also accept |P(u)| itself vanishing
            _ if periodic.evaluate(u).abs() <= zero_tol => matched.push((x, u)),
            _ => unmatched_fixed.push(x),
        }
    }
    let unmatched_zeros = periodic_zeros
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(&z, _)| z)
        .collect();

    Ok(FixedZeroReport {
        fixed_points,
        periodic_zeros,
        matched,
        unmatched_fixed,
        unmatched_zeros,
    })
}

/// Assemble a full-line candidate from a prescribed negative branch ψ and a
/// positive periodic displacement P₂ in the gauge of g₂ = id − ψ^{−id}.
///
/// The first commutator of the lemma system vanishes by construction. The
/// returned report is the second commutator on `grid`, which is not
/// guaranteed and decides whether the candidate actually solves the
/// equation.
pub fn theorem2_construct(
    psi: &Generator,
    p2: &PeriodicFunction,
    grid: &Grid,
) -> Result<(CandidateSolution, ResidualReport)> {
    if !p2.certify_positive() {
        return Err(Error::Validation(
            "periodic displacement must be certified positive for the branch to stay in the cone"
                .into(),
        ));
    }
    let g2 = psi.branch().conjugate_neg().displacement();
    let profile = match g2.linear_slope() {
        Some(s) if s > 0.0 && s < 1.0 => SeedProfile::Log,
        _ => SeedProfile::Linear,
    };
    let c = Arc::new(AbelConjugacy::solve(g2, p2.period(), DEFAULT_X0, profile)?);
    let f_pos = build_branch(&c, p2)?;
    let f = RealFunction::piecewise(psi.branch().clone(), f_pos.clone())?;
    let cone_grid = Grid::symmetric_log(1e-6, 1e4, 256);
    let candidate = CandidateSolution::new_with_cone_grid(
        f,
        Provenance::Theorem2,
        psi.clone(),
        &cone_grid,
    )?;
    let second = commutator_residual_traced(
        &psi.branch().conjugate_neg(),
        &f_pos.displacement(),
        grid,
    )?;
    Ok((candidate, second))
}

/// Defect of the splitting identity: hA(x) + hB(x) − x over the grid, where
/// each h is the branch of its (conjugacy, periodic) pair.
pub fn eq12_residual(
    a: (&Arc<AbelConjugacy>, &PeriodicFunction),
    b: (&Arc<AbelConjugacy>, &PeriodicFunction),
    grid: &Grid,
) -> Result<ResidualReport> {
    let ha = build_branch(a.0, a.1)?;
    let hb = build_branch(b.0, b.1)?;
    residual_sweep(grid, true, |x| {
        Ok(ha.evaluate(x)? + hb.evaluate(x)? - x)
    })
}
