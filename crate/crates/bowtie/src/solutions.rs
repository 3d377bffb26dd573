//! The equation layer: residual verification of f(f(−x)+x) = f(−f(x))+f(x)
//! on the full line, the commutator system equivalent to it on the positive
//! half-line, the extension constructor from a strict generator, and the two
//! exact dualities (displacement and rotation).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalg::{
    commutator_residual_traced, cone_check, residual_sweep, ConeReport, Grid, Interval,
    RealFunction, ResidualReport,
};

/// Sup-residual tolerance at which a closed-form candidate counts as solving
/// the equation.
pub const CLOSED_FORM_SOLVE_TOL: f64 = 1e-9;
/// Tolerance for interpolant-backed candidates, where interpolation error of
/// order h² dominates.
pub const INTERPOLANT_SOLVE_TOL: f64 = 1e-6;

/// A prescribed negative branch together with its cone validation.
#[derive(Debug, Clone)]
pub struct Generator {
    branch: RealFunction,
    cone: ConeReport,
}

impl Generator {
    /// Validate `branch` as a bow-tie member on the non-positive half-line.
    /// Strictness is recorded in the report rather than required.
    pub fn validate(branch: RealFunction) -> Result<Generator> {
        let grid = Grid::working_positive().reflected();
        let cone = cone_check(&branch, Interval::NEG, &grid, true)?;
        if !cone.member {
            let v = cone.first_violation;
            return Err(Error::Validation(format!(
                "generator branch leaves the bow-tie cone on R-: {v:?}"
            )));
        }
        if branch.domain().contains(0.0) {
            let v0 = branch.evaluate(0.0)?;
            if v0 != 0.0 {
                return Err(Error::Validation(format!(
                    "continuous generator branch must vanish at 0, got {v0}"
                )));
            }
        }
        Ok(Generator { branch, cone })
    }

    pub fn branch(&self) -> &RealFunction {
        &self.branch
    }

    pub fn cone(&self) -> &ConeReport {
        &self.cone
    }

    /// True when the branch sits strictly inside the cone.
    pub fn is_strict(&self) -> bool {
        self.cone.strict
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Corollary1,
    Theorem2,
    Homogeneous,
    User,
}

/// A full-line candidate: the generator branch on ℝ₋, some positive branch
/// on ℝ₊. Candidates violating the cone on the validation grid are flagged
/// in `cone`, not rejected.
#[derive(Debug, Clone)]
pub struct CandidateSolution {
    f: RealFunction,
    provenance: Provenance,
    generator: Generator,
    cone: ConeReport,
    warning: Option<String>,
}

impl CandidateSolution {
    pub fn new(
        f: RealFunction,
        provenance: Provenance,
        generator: Generator,
    ) -> Result<CandidateSolution> {
        CandidateSolution::new_with_cone_grid(f, provenance, generator, &Grid::default_symmetric())
    }

    /// Like `new` with an explicit membership-validation grid, for candidates
    /// whose evaluation is expensive (orbit-recursion branches).
    pub fn new_with_cone_grid(
        f: RealFunction,
        provenance: Provenance,
        generator: Generator,
        grid: &Grid,
    ) -> Result<CandidateSolution> {
        let cone = cone_check(&f, Interval::REAL, grid, true)?;
        Ok(CandidateSolution {
            f,
            provenance,
            generator,
            cone,
            warning: None,
        })
    }

    fn with_warning(mut self, warning: Option<String>) -> CandidateSolution {
        self.warning = warning;
        self
    }

    pub fn function(&self) -> &RealFunction {
        &self.f
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn cone(&self) -> &ConeReport {
        &self.cone
    }

    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    /// The positive branch f₊.
    pub fn positive_branch(&self) -> RealFunction {
        self.f.restrict_pos()
    }

    /// The negative branch f₋.
    pub fn negative_branch(&self) -> RealFunction {
        self.f.restrict_neg()
    }
}

/// Pointwise defect of the equation at x: f(f(−x)+x) − f(−f(x)) − f(x).
pub fn eq1_pointwise(f: &RealFunction, x: f64) -> Result<f64> {
    let f_neg_x = f.evaluate(-x)?;
    let inner = f_neg_x + x;
    let lhs = f.evaluate(inner)?;
    let fx = f.evaluate(x)?;
    let outer = f.evaluate(-fx)?;
    // subtract fx first: for extension-built solutions lhs − fx cancels
    // exactly, leaving only the single rounding of the inner argument
    Ok((lhs - fx) - outer)
}

/// Sup of the equation defect over the grid.
pub fn eq1_residual(f: &RealFunction, grid: &Grid) -> Result<ResidualReport> {
    residual_sweep(grid, true, |x| eq1_pointwise(f, x))
}

/// The two commutator residuals of the lemma system on the non-negative
/// half-line: [id − (f₋)^{−id}, f₊] and [(f₋)^{−id}, id − f₊].
pub fn lemma_residuals(
    candidate: &CandidateSolution,
    grid: &Grid,
) -> Result<(ResidualReport, ResidualReport)> {
    grid.check_within(&Interval::POS)?;
    let u = candidate.negative_branch().conjugate_neg();
    let f_pos = candidate.positive_branch();
    let first = commutator_residual_traced(&u.displacement(), &f_pos, grid)?;
    let second = commutator_residual_traced(&u, &f_pos.displacement(), grid)?;
    Ok((first, second))
}

/// Extend a strict generator to a solution: f = φ on ℝ₋ and
/// f = id − φ^{−id} on ℝ₊.
///
/// Stated for strict cone members; non-strict generators are accepted with a
/// warning and the membership verdict of the result is reported, not assumed.
pub fn corollary1_extend(generator: &Generator) -> Result<CandidateSolution> {
    let warning = (!generator.is_strict()).then(|| {
        "generator is not strictly cone-interior; the extension formula is \
         evaluable but solutionhood is reported, not guaranteed"
            .to_string()
    });
    let phi = generator.branch().clone();
    let pos = phi.conjugate_neg().displacement();
    let f = RealFunction::piecewise(phi, pos)?;
    Ok(CandidateSolution::new(f, Provenance::Corollary1, generator.clone())?.with_warning(warning))
}

/// The displacement dual id − f with generator id − ψ. The lemma residual
/// pair of the result is the component-swapped pair of the input, exactly.
pub fn displacement_dual(candidate: &CandidateSolution) -> Result<CandidateSolution> {
    let f = candidate.function().displacement();
    let generator = Generator::validate(f.restrict_neg())?;
    let warning = candidate.warning.clone();
    Ok(CandidateSolution::new(f, candidate.provenance, generator)?.with_warning(warning))
}

/// The 180-degree rotation f^{−id}. The pointwise equation defect of the
/// result at x is exactly minus the defect of the input at −x.
pub fn rotate_dual(candidate: &CandidateSolution) -> Result<CandidateSolution> {
    let f = candidate.function().conjugate_neg();
    let generator = Generator::validate(f.restrict_neg())?;
    let warning = candidate.warning.clone();
    Ok(CandidateSolution::new(f, candidate.provenance, generator)?.with_warning(warning))
}

/// The two-slope family f(x) = ax for x ≤ 0, bx for x ≥ 0, which solves the
/// equation for every pair of slopes in (0, 1).
pub fn homogeneous_solution(a: f64, b: f64) -> Result<CandidateSolution> {
    for (name, s) in [("a", a), ("b", b)] {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Validation(format!(
                "slope {name} = {s} outside (0, 1) violates strict cone membership"
            )));
        }
    }
    let f = RealFunction::piecewise(RealFunction::linear(a), RealFunction::linear(b))?;
    let generator = Generator::validate(RealFunction::linear(a).restrict_neg())?;
    CandidateSolution::new(f, Provenance::Homogeneous, generator)
}

/// Canonical non-solution family: two-slope candidate whose positive slope
/// carries a multiplicative sinusoidal perturbation. Stays inside the cone
/// for amplitude < min(b, 1−b), fails commutation.
pub fn broken_candidate(a: f64, b: f64, amplitude: f64) -> Result<CandidateSolution> {
    if !(a > 0.0 && a < 1.0 && b - amplitude.abs() > 0.0 && b + amplitude.abs() < 1.0) {
        return Err(Error::Validation(format!(
            "broken candidate parameters (a={a}, b={b}, amplitude={amplitude}) leave the cone"
        )));
    }
    let f = RealFunction::piecewise(
        RealFunction::linear(a),
        RealFunction::sin_log_slope(b, amplitude).restrict_pos(),
    )?;
    let generator = Generator::validate(RealFunction::linear(a).restrict_neg())?;
    CandidateSolution::new(f, Provenance::User, generator)
}
