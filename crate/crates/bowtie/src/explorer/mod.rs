//! Derivative-free search over Abel-parametrized families of cone-interior
//! maps, probing whether any non-homogeneous g can suppress the residual of
//! g(x) = g(x − g(x)) + g(g(x)) or of the two-branch splitting identity.

mod nelder_mead;

pub use nelder_mead::{minimize, MinimizeResult, NelderMeadParams};

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::abel::{build_branch, AbelConjugacy, PeriodicFunction, SeedProfile};
use crate::error::{Error, Result};
use crate::funcalg::{residual_sweep, Grid, RealFunction};
use crate::verify::eq13_residual;

/// Residual below which a search point would count as a candidate. An
/// engineering choice; nothing in the source material derives it.
pub const VERDICT_THRESHOLD: f64 = 1e-9;

pub const VERDICT_NO_CANDIDATE: &str = "no sub-tolerance non-homogeneous candidate found";
pub const VERDICT_CANDIDATE: &str = "candidate found (flagged for closed-form audit)";

/// Fixed framing attached to every outcome.
pub const EVIDENCE_NOTE: &str =
    "numerical search evidence only; not a proof or refutation of the homogeneity conjecture";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Eq13,
    Eq12,
}

/// A point of the search family: base slope a and trigonometric
/// perturbation coefficients of the periodic displacement P = ω + Σ
/// (first half cosine harmonics, second half sine harmonics).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub a: f64,
    pub coeffs: Vec<f64>,
}

impl FamilyPoint {
    pub fn homogeneous(a: f64, coeff_count: usize) -> FamilyPoint {
        FamilyPoint {
            a,
            coeffs: vec![0.0; coeff_count],
        }
    }

    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn periodic(&self) -> Result<PeriodicFunction> {
        let half = self.coeffs.len() / 2;
        PeriodicFunction::trig(
            1.0,
            1.0,
            self.coeffs[..half].to_vec(),
            self.coeffs[half..].to_vec(),
        )
    }

    /// The derived map g = α⁻¹(P∘α + α) over the conjugacy of a·id.
    pub fn derived(&self) -> Result<RealFunction> {
        let c = Arc::new(AbelConjugacy::solve(
            RealFunction::linear(self.a),
            1.0,
            1.0,
            SeedProfile::Log,
        )?);
        build_branch(&c, &self.periodic()?)
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub objective: Objective,
    pub grid: Grid,
    pub coeff_count: usize,
    /// Per-coefficient amplitude bound for the seeded starting draws.
    pub amplitude: f64,
    pub nm: NelderMeadParams,
    pub restarts: usize,
    /// Exclusion radius: points with ‖coeffs‖∞ < delta are penalized.
    pub delta: f64,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            objective: Objective::Eq13,
            grid: Grid::log_spaced(1e-3, 1e3, 128),
            coeff_count: 4,
            amplitude: 0.3,
            nm: NelderMeadParams::default(),
            restarts: 20,
            delta: 0.05,
            lambda: 1e3,
            seed: 42,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.coeff_count == 0
            || self.restarts == 0
            || !(self.amplitude >= 0.0)
            || !(self.delta >= 0.0)
            || !(self.lambda >= 0.0)
        {
            return Err(Error::Validation("invalid search configuration".into()));
        }
        Ok(())
    }
}

/// The selected residual at a family point, with an infinite penalty when
/// the point leaves the admissible region (slope outside (0.05, 0.95) or P
/// not certified positive). The slope bound keeps the family away from the
/// a → 1 degeneration where g collapses onto the identity and every
/// residual vanishes trivially.
pub fn objective_eval(p: &FamilyPoint, config: &SearchConfig) -> f64 {
    if !(p.a > 0.05 && p.a < 0.95) {
        return f64::INFINITY;
    }
    let Ok(periodic) = p.periodic() else {
        return f64::INFINITY;
    };
    if !periodic.certify_positive() {
        return f64::INFINITY;
    }
    let residual = match config.objective {
        Objective::Eq13 => p
            .derived()
            .and_then(|g| eq13_residual(&g, &config.grid))
            .map(|r| r.sup),
        Objective::Eq12 => eq12_objective(p, config),
    };
    residual.unwrap_or(f64::INFINITY)
}

/// Splitting objective: the perturbed branch over a·id plus the unperturbed
/// complementary branch over (1−a)·id, measured against the identity. Zero
/// perturbation recovers the exact homogeneous split a·x + (1−a)·x = x.
fn eq12_objective(p: &FamilyPoint, config: &SearchConfig) -> Result<f64> {
    let ha = p.derived()?;
    let cb = Arc::new(AbelConjugacy::solve(
        RealFunction::linear(1.0 - p.a),
        1.0,
        1.0,
        SeedProfile::Log,
    )?);
    let hb = build_branch(&cb, &PeriodicFunction::constant(1.0, 1.0))?;
    let r = residual_sweep(&config.grid, false, |x| {
        Ok(ha.evaluate(x)? + hb.evaluate(x)? - x)
    })?;
    Ok(r.sup)
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub best: FamilyPoint,
    /// Raw objective at the best point (the exclusion penalty vanishes on
    /// every reportable point).
    pub best_residual: f64,
    pub best_restart: usize,
    pub verdict: String,
    pub note: String,
    /// Best penalized value after every iteration, restarts concatenated.
    pub trace: Vec<f64>,
    pub converged_restarts: usize,
}

/// Multi-restart minimization with the homogeneous locus excluded by the
/// penalty λ·max(0, δ − ‖coeffs‖∞). Deterministic for a fixed config.
pub fn search(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let mut best: Option<(FamilyPoint, f64, usize)> = None;
    let mut trace = Vec::new();
    let mut converged_restarts = 0;

    for restart in 0..config.restarts {
        let mut rng =
            ChaCha20Rng::seed_from_u64(config.seed ^ (restart as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let a0 = rng.random_range(0.1..0.9);
        let bound = (config.amplitude / config.coeff_count as f64).max(f64::MIN_POSITIVE);
        let coeffs0: Vec<f64> = (0..config.coeff_count)
            .map(|_| rng.random_range(-bound..bound))
            .collect();

        let mut x0 = Vec::with_capacity(config.coeff_count + 1);
        x0.push(a0);
        x0.extend_from_slice(&coeffs0);

        let mut penalized = |v: &[f64]| -> f64 {
            let p = FamilyPoint {
                a: v[0],
                coeffs: v[1..].to_vec(),
            };
            let raw = objective_eval(&p, config);
            raw + config.lambda * (config.delta - p.coeff_norm()).max(0.0)
        };
        let result = minimize(&mut penalized, &x0, 0.05, &config.nm);
        if result.converged {
            converged_restarts += 1;
        }
        trace.extend_from_slice(&result.trace);

        let point = FamilyPoint {
            a: result.x[0],
            coeffs: result.x[1..].to_vec(),
        };
        let raw = objective_eval(&point, config);
        let keep = match &best {
            Some((_, b, _)) => raw < *b,
            None => true,
        };
        if keep {
            best = Some((point, raw, restart));
        }
    }

    let (best, best_residual, best_restart) = best.expect("at least one restart");
    let verdict = if best_residual <= VERDICT_THRESHOLD && best.coeff_norm() >= config.delta {
        VERDICT_CANDIDATE
    } else {
        VERDICT_NO_CANDIDATE
    };
    Ok(SearchOutcome {
        best,
        best_residual,
        best_restart,
        verdict: verdict.to_string(),
        note: EVIDENCE_NOTE.to_string(),
        trace,
        converged_restarts,
    })
}

/// Residual versus amplitude for a single sine harmonic at fixed slope.
pub fn perturbation_scan(
    a: f64,
    amplitudes: &[f64],
    config: &SearchConfig,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(amplitudes.len());
    for &eps in amplitudes {
        if !(eps.abs() < 1.0) {
            return Err(Error::Validation(format!(
                "amplitude {eps} breaks the positivity bound"
            )));
        }
        let mut coeffs = vec![0.0; config.coeff_count.max(2)];
        let half = coeffs.len() / 2;
        coeffs[half] = eps;
        let p = FamilyPoint { a, coeffs };
        out.push((eps, objective_eval(&p, config)));
    }
    Ok(out)
}
