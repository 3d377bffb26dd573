//! Command-line front end: construct candidates, verify residuals, apply
//! dualities, work with Abel conjugacies and branches, and run the explorer.
//!
//! Exit codes: 0 verdict-success, 1 verdict-failure (report still emitted),
//! 2 usage or validation error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bowtie::abel::{
    build_branch, eq12_residual, extract_periodic, reconstruct_g, solve_abel, AbelConjugacy,
    PeriodicFunction, SeedProfile, DEFAULT_OMEGA, DEFAULT_X0,
};
use bowtie::explorer::{perturbation_scan, search, Objective, SearchConfig};
use bowtie::funcalg::{
    cone_check, residual_sweep, Grid, Interval, RealFunction, ResidualReport, TracePoint,
};
use bowtie::jsonspec::{ConjugacySpec, FunctionSpec};
use bowtie::solutions::{
    corollary1_extend, displacement_dual, eq1_residual, homogeneous_solution, lemma_residuals,
    rotate_dual, CandidateSolution, Generator, Provenance, CLOSED_FORM_SOLVE_TOL,
};
use bowtie::verify::{
    eq13_residual, infer_homogeneity, limit_evidence, proposition5_check, sablik_residual,
    theorem1_decomposition, DecompositionPair, EQUIVALENCE_TOL, HOMOGENEITY_X_SMALL,
};

#[derive(Parser)]
#[command(name = "bowtie", version, about = "Bow-tie functional equation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build candidate solutions
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Residual verification of equations and identities
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Exact dualities on candidates
    #[command(subcommand)]
    Dual(DualCmd),
    /// Abel conjugacies
    #[command(subcommand)]
    Abel(AbelCmd),
    /// Branches over a conjugacy
    #[command(subcommand)]
    Branch(BranchCmd),
    /// Structural analysis of candidates
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Numerical searches over parametrized families
    #[command(subcommand)]
    Explore(ExploreCmd),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Extend a negative branch to a full-line candidate
    Corollary1 {
        /// Generator branch spec (inline JSON or file path)
        #[arg(long)]
        phi: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Two-slope candidate ax (x ≤ 0), bx (x ≥ 0)
    Homogeneous {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Assemble a candidate from a negative branch and a positive periodic
    /// displacement; reports the unguaranteed second commutator
    Theorem2 {
        #[arg(long)]
        psi: String,
        /// Periodic displacement spec (inline JSON or file path)
        #[arg(long)]
        p2: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Sup defect of f(f(−x)+x) = f(−f(x))+f(x)
    Eq1 {
        #[arg(long)]
        f: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// The two commutator residuals equivalent to eq1 on the half-line
    Lemma {
        #[arg(long)]
        f: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Splitting identity hA + hB = id for two (conjugacy, periodic) pairs
    Eq12 {
        #[arg(long)]
        conjugacy_a: String,
        #[arg(long)]
        periodic_a: String,
        #[arg(long)]
        conjugacy_b: String,
        #[arg(long)]
        periodic_b: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Self-referential identity g(x) = g(x − g(x)) + g(g(x))
    Eq13 {
        #[arg(long)]
        g: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Conditional Cauchy equation F = F∘r1 + F∘r2
    Sablik {
        #[arg(long)]
        f: String,
        #[arg(long)]
        r1: String,
        /// Defaults to id − r1
        #[arg(long)]
        r2: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Equivalence of [g, id − g] = 0 and the self-referential identity
    Prop5 {
        #[arg(long)]
        g: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum DualCmd {
    /// id − f, a solution exactly when f is
    Displacement {
        #[arg(long)]
        f: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// −f(−x), a solution exactly when f is
    Rotate {
        #[arg(long)]
        f: String,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum AbelCmd {
    /// Solve α(g(x)) = α(x) + ω and report the Abel residual
    Solve {
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = DEFAULT_OMEGA)]
        omega: f64,
        #[arg(long, default_value_t = DEFAULT_X0)]
        x0: f64,
        #[arg(long, value_enum, default_value_t = ProfileArg::Linear)]
        profile: ProfileArg,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Recover g through α and α⁻¹ alone and compare with the stored g
    Reconstruct {
        #[arg(long)]
        conjugacy: String,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum BranchCmd {
    /// h = α⁻¹(P∘α + α) from a conjugacy and a periodic displacement
    Build {
        #[arg(long)]
        conjugacy: String,
        #[arg(long)]
        periodic: String,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Sample the periodic displacement of h in the gauge of the conjugacy
    Extract {
        #[arg(long)]
        h: String,
        #[arg(long)]
        conjugacy: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Homogeneity inference and the decomposition identity for a generator
    Theorem1 {
        #[arg(long)]
        psi: String,
        /// Candidate to test the decomposition against; defaults to the
        /// extension of psi
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Subcommand)]
enum ExploreCmd {
    /// Multi-restart search for non-homogeneous maps suppressing the
    /// self-referential residual
    Eq13 {
        #[arg(long, default_value_t = 4)]
        coeffs: usize,
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 1e3)]
        lambda: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Residual versus amplitude for a single sine harmonic
    Scan {
        #[arg(long)]
        a: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        amplitudes: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        coeffs: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Linear,
    Log,
    Smoothstep,
}

impl From<ProfileArg> for SeedProfile {
    fn from(p: ProfileArg) -> SeedProfile {
        match p {
            ProfileArg::Linear => SeedProfile::Linear,
            ProfileArg::Log => SeedProfile::Log,
            ProfileArg::Smoothstep => SeedProfile::Smoothstep,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Log,
    Linear,
    SymmetricLog,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridPreset {
    /// The command's default grid
    Default,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Named grid preset
    #[arg(long, value_enum)]
    grid: Option<GridPreset>,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long, value_enum)]
    grid_spacing: Option<SpacingArg>,
}

/// Per-command default grid geometry.
struct GridDefault {
    min: f64,
    max: f64,
    points: usize,
    spacing: SpacingArg,
}

const SYMMETRIC_DEFAULT: GridDefault = GridDefault {
    min: 1e-6,
    max: 1e4,
    points: 2048,
    spacing: SpacingArg::SymmetricLog,
};

const POSITIVE_DEFAULT: GridDefault = GridDefault {
    min: 1e-6,
    max: 1e4,
    points: 2048,
    spacing: SpacingArg::Log,
};

/// Smaller positive default for orbit-recursion evaluations.
const ORBIT_DEFAULT: GridDefault = GridDefault {
    min: 1e-3,
    max: 1e3,
    points: 128,
    spacing: SpacingArg::Log,
};

const EXPLORE_DEFAULT: GridDefault = GridDefault {
    min: 1e-3,
    max: 1e3,
    points: 128,
    spacing: SpacingArg::Log,
};

impl GridArgs {
    fn resolve(&self, default: &GridDefault) -> Result<Grid, CliError> {
        let min = self.grid_min.unwrap_or(default.min);
        let max = self.grid_max.unwrap_or(default.max);
        let points = self.grid_points.unwrap_or(default.points);
        let spacing = self.grid_spacing.unwrap_or(default.spacing);
        if points < 2 {
            return Err(CliError(format!("grid needs at least 2 points, got {points}")));
        }
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(CliError(format!("invalid grid range [{min}, {max}]")));
        }
        match spacing {
            SpacingArg::Linear => Ok(Grid::linear(min, max, points)),
            SpacingArg::Log | SpacingArg::SymmetricLog if !(min > 0.0) => Err(CliError(
                "log-spaced grids need a positive minimum".to_string(),
            )),
            SpacingArg::Log => Ok(Grid::log_spaced(min, max, points)),
            SpacingArg::SymmetricLog => Ok(Grid::symmetric_log(min, max, points)),
        }
    }
}

#[derive(Args, Clone)]
struct IoArgs {
    /// Output path for the primary artifact (report or constructed object);
    /// stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV residual trace output path
    #[arg(long)]
    trace: Option<PathBuf>,
}

struct CliError(String);

impl From<bowtie::Error> for CliError {
    fn from(e: bowtie::Error) -> CliError {
        CliError(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.0);
            process::exit(2);
        }
    }
}

/// Read a spec argument: inline JSON when it looks like an object, a file
/// path otherwise.
fn read_spec_text(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| CliError(format!("cannot read '{arg}': {e}")))
    }
}

fn load_function(arg: &str) -> Result<RealFunction, CliError> {
    let text = read_spec_text(arg)?;
    let spec: FunctionSpec =
        serde_json::from_str(&text).map_err(|e| CliError(format!("malformed function spec: {e}")))?;
    Ok(spec.to_function()?)
}

fn load_periodic(arg: &str) -> Result<PeriodicFunction, CliError> {
    let text = read_spec_text(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError(format!("malformed periodic spec: {e}")))
}

fn load_conjugacy(arg: &str) -> Result<Arc<AbelConjugacy>, CliError> {
    let text = read_spec_text(arg)?;
    let spec: ConjugacySpec =
        serde_json::from_str(&text).map_err(|e| CliError(format!("malformed conjugacy spec: {e}")))?;
    Ok(Arc::new(spec.to_conjugacy()?))
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)
        .and_then(|()| fs::rename(&tmp, path))
        .map_err(|e| CliError(format!("cannot write '{}': {e}", path.display())))
}

fn emit_text(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn emit_json(value: &serde_json::Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError(format!("serialization failed: {e}")))?;
    text.push('\n');
    emit_text(&text, out)
}

fn trace_csv(points: &[TracePoint], x_column: &str) -> String {
    let mut csv = format!("{x_column},residual\n");
    for p in points {
        csv.push_str(&format!("{},{}\n", p.x, p.residual));
    }
    csv
}

fn emit_trace(report: &ResidualReport, trace: Option<&Path>) -> Result<(), CliError> {
    if let Some(path) = trace {
        let points = report
            .trace
            .as_deref()
            .ok_or_else(|| CliError("residual trace was not retained".to_string()))?;
        write_atomic(path, &trace_csv(points, "x"))?;
    }
    Ok(())
}

/// A report stripped of its bulky per-point trace for JSON emission.
fn stripped(report: &ResidualReport) -> ResidualReport {
    let mut r = report.clone();
    r.trace = None;
    r
}

fn verdict_code(pass: bool) -> i32 {
    if pass {
        0
    } else {
        1
    }
}

fn function_json(f: &RealFunction) -> Result<serde_json::Value, CliError> {
    let spec = FunctionSpec::from_function(f)?;
    serde_json::to_value(&spec).map_err(|e| CliError(format!("serialization failed: {e}")))
}

/// Wrap a full-line function as a user candidate, validating its negative
/// branch as a generator.
fn candidate_of(f: RealFunction) -> Result<CandidateSolution, CliError> {
    let generator = Generator::validate(f.restrict_neg())?;
    Ok(CandidateSolution::new(f, Provenance::User, generator)?)
}

/// Emit a constructed function: the pure function spec goes to --out (so it
/// round-trips through later verification), the side report to stdout. With
/// no --out the function spec itself is the stdout artifact.
fn emit_constructed(
    f: &RealFunction,
    report: serde_json::Value,
    io: &IoArgs,
) -> Result<(), CliError> {
    let spec = function_json(f)?;
    match &io.out {
        Some(path) => {
            emit_json(&spec, Some(path))?;
            emit_json(&report, None)
        }
        None => emit_json(&spec, None),
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Construct(cmd) => run_construct(cmd),
        Command::Verify(cmd) => run_verify(cmd),
        Command::Dual(cmd) => run_dual(cmd),
        Command::Abel(cmd) => run_abel(cmd),
        Command::Branch(cmd) => run_branch(cmd),
        Command::Analyze(cmd) => run_analyze(cmd),
        Command::Explore(cmd) => run_explore(cmd),
    }
}

fn run_construct(cmd: ConstructCmd) -> Result<i32, CliError> {
    match cmd {
        ConstructCmd::Corollary1 { phi, io } => {
            let generator = Generator::validate(load_function(&phi)?)?;
            let candidate = corollary1_extend(&generator)?;
            let report = json!({
                "provenance": "corollary1",
                "cone": candidate.cone(),
                "strict_generator": generator.is_strict(),
                "warning": candidate.warning(),
            });
            emit_constructed(candidate.function(), report, &io)?;
            Ok(0)
        }
        ConstructCmd::Homogeneous { a, b, io } => {
            let candidate = homogeneous_solution(a, b)?;
            let report = json!({
                "provenance": "homogeneous",
                "a": a,
                "b": b,
                "cone": candidate.cone(),
            });
            emit_constructed(candidate.function(), report, &io)?;
            Ok(0)
        }
        ConstructCmd::Theorem2 {
            psi,
            p2,
            tol,
            grid,
            io,
        } => {
            let generator = Generator::validate(load_function(&psi)?)?;
            let p2 = load_periodic(&p2)?;
            let grid = grid.resolve(&POSITIVE_DEFAULT)?;
            let tol = tol.unwrap_or(CLOSED_FORM_SOLVE_TOL);
            let (candidate, second) = bowtie::abel::theorem2_construct(&generator, &p2, &grid)?;
            emit_trace(&second, io.trace.as_deref())?;
            let pass = second.passes(tol);
            let report = json!({
                "provenance": "theorem2",
                "cone": candidate.cone(),
                "second_commutator": stripped(&second),
                "tol": tol,
                "pass": pass,
            });
            emit_constructed(candidate.function(), report, &io)?;
            Ok(verdict_code(pass))
        }
    }
}

fn run_verify(cmd: VerifyCmd) -> Result<i32, CliError> {
    match cmd {
        VerifyCmd::Eq1 { f, tol, grid, io } => {
            let f = load_function(&f)?;
            let grid = grid.resolve(&SYMMETRIC_DEFAULT)?;
            let tol = tol.unwrap_or(CLOSED_FORM_SOLVE_TOL);
            let report = eq1_residual(&f, &grid)?;
            emit_trace(&report, io.trace.as_deref())?;
            let pass = report.passes(tol);
            emit_json(
                &json!({
                    "equation": "eq1",
                    "residual": stripped(&report),
                    "tol": tol,
                    "pass": pass,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(pass))
        }
        VerifyCmd::Lemma { f, tol, grid, io } => {
            let candidate = candidate_of(load_function(&f)?)?;
            let grid = grid.resolve(&POSITIVE_DEFAULT)?;
            let tol = tol.unwrap_or(CLOSED_FORM_SOLVE_TOL);
            let (first, second) = lemma_residuals(&candidate, &grid)?;
            if let Some(path) = io.trace.as_deref() {
                // one CSV: per-point maximum of the two commutator defects
                let (ta, tb) = (first.trace.as_deref(), second.trace.as_deref());
                let merged: Vec<TracePoint> = match (ta, tb) {
                    (Some(a), Some(b)) => a
                        .iter()
                        .zip(b)
                        .map(|(p, q)| TracePoint {
                            x: p.x,
                            residual: p.residual.abs().max(q.residual.abs()),
                        })
                        .collect(),
                    _ => return Err(CliError("residual trace was not retained".to_string())),
                };
                write_atomic(path, &trace_csv(&merged, "x"))?;
            }
            let pass = first.passes(tol) && second.passes(tol);
            emit_json(
                &json!({
                    "equation": "lemma",
                    "first_commutator": stripped(&first),
                    "second_commutator": stripped(&second),
                    "tol": tol,
                    "pass": pass,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(pass))
        }
        VerifyCmd::Eq12 {
            conjugacy_a,
            periodic_a,
            conjugacy_b,
            periodic_b,
            tol,
            grid,
            io,
        } => {
            let ca = load_conjugacy(&conjugacy_a)?;
            let pa = load_periodic(&periodic_a)?;
            let cb = load_conjugacy(&conjugacy_b)?;
            let pb = load_periodic(&periodic_b)?;
            let grid = grid.resolve(&ORBIT_DEFAULT)?;
            let tol = tol.unwrap_or(CLOSED_FORM_SOLVE_TOL);
            let report = eq12_residual((&ca, &pa), (&cb, &pb), &grid)?;
            emit_trace(&report, io.trace.as_deref())?;
            let pass = report.passes(tol);
            emit_json(
                &json!({
                    "equation": "eq12",
                    "residual": stripped(&report),
                    "tol": tol,
                    "pass": pass,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(pass))
        }
        VerifyCmd::Eq13 { g, tol, grid, io } => {
            let g = load_function(&g)?;
            let grid = grid.resolve(&POSITIVE_DEFAULT)?;
            let tol = tol.unwrap_or(CLOSED_FORM_SOLVE_TOL);
            let cone = cone_check(&g, Interval::POS, &grid, false)?;
            if !cone.member {
                return Err(CliError(format!(
                    "g leaves the bow-tie cone on the grid: {:?}",
                    cone.first_violation
                )));
            }
            let report = eq13_residual(&g, &grid)?;
            emit_trace(&report, io.trace.as_deref())?;
            let pass = report.passes(tol);
            emit_json(
                &json!({
                    "equation": "eq13",
                    "cone": cone,
                    "residual": stripped(&report),
                    "tol": tol,
                    "pass": pass,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(pass))
        }
        VerifyCmd::Sablik {
            f,
            r1,
            r2,
            tol,
            grid,
            io,
        } => {
            let f = load_function(&f)?;
            let r1 = load_function(&r1)?;
            let grid = grid.resolve(&POSITIVE_DEFAULT)?;
            let tol = tol.unwrap_or(CLOSED_FORM_SOLVE_TOL);
            let pair = match r2 {
                Some(r2) => DecompositionPair::validate(r1, load_function(&r2)?, &grid)?,
                None => DecompositionPair::from_displacement(r1, &grid)?,
            };
            let report = sablik_residual(&f, &pair, &grid)?;
            emit_trace(&report, io.trace.as_deref())?;
            let limit = limit_evidence(&f)?;
            let pass = report.passes(tol);
            emit_json(
                &json!({
                    "equation": "sablik",
                    "residual": stripped(&report),
                    "limit_evidence": limit,
                    "tol": tol,
                    "pass": pass,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(pass))
        }
        VerifyCmd::Prop5 { g, tol, grid, io } => {
            let g = load_function(&g)?;
            let grid = grid.resolve(&POSITIVE_DEFAULT)?;
            let tol = tol.unwrap_or(EQUIVALENCE_TOL);
            let cone = cone_check(&g, Interval::POS, &grid, false)?;
            if !cone.member {
                return Err(CliError(format!(
                    "g leaves the bow-tie cone on the grid: {:?}",
                    cone.first_violation
                )));
            }
            let report = proposition5_check(&g, &grid, tol)?;
            emit_trace(&report.eq13, io.trace.as_deref())?;
            // the certified equivalence: the two verdicts must agree
            let agree = report.commute.passes(tol) == report.eq13.passes(tol);
            emit_json(
                &json!({
                    "equation": "prop5",
                    "commutator": stripped(&report.commute),
                    "eq13": stripped(&report.eq13),
                    "tol": tol,
                    "common_abel_plausible": report.common_abel_plausible,
                    "verdicts_agree": agree,
                    "pass": agree,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(agree))
        }
    }
}

fn run_dual(cmd: DualCmd) -> Result<i32, CliError> {
    let (f, io, name, dual): (String, IoArgs, &str, fn(&CandidateSolution) -> _) = match cmd {
        DualCmd::Displacement { f, io } => (f, io, "displacement", displacement_dual),
        DualCmd::Rotate { f, io } => (f, io, "rotate", rotate_dual),
    };
    let candidate = candidate_of(load_function(&f)?)?;
    let result = dual(&candidate)?;
    let report = json!({
        "dual": name,
        "cone": result.cone(),
        "warning": result.warning(),
    });
    emit_constructed(result.function(), report, &io)?;
    Ok(0)
}

fn run_abel(cmd: AbelCmd) -> Result<i32, CliError> {
    match cmd {
        AbelCmd::Solve {
            g,
            omega,
            x0,
            profile,
            tol,
            grid,
            io,
        } => {
            let g = load_function(&g)?;
            let grid = grid.resolve(&ORBIT_DEFAULT)?;
            let tol = tol.unwrap_or(1e-9);
            let conjugacy = Arc::new(solve_abel(g, omega, x0, profile.into())?);
            let residual = conjugacy.abel_residual(&grid)?;
            emit_trace(&residual, io.trace.as_deref())?;
            let pass = residual.passes(tol);
            let spec = ConjugacySpec::from_conjugacy(&conjugacy)?;
            let spec_value = serde_json::to_value(&spec)
                .map_err(|e| CliError(format!("serialization failed: {e}")))?;
            let report = json!({
                "omega": omega,
                "x0": x0,
                "abel_residual": stripped(&residual),
                "tol": tol,
                "pass": pass,
            });
            match &io.out {
                Some(path) => {
                    emit_json(&spec_value, Some(path))?;
                    emit_json(&report, None)?;
                }
                None => emit_json(&spec_value, None)?,
            }
            Ok(verdict_code(pass))
        }
        AbelCmd::Reconstruct {
            conjugacy,
            tol,
            grid,
            io,
        } => {
            let c = load_conjugacy(&conjugacy)?;
            let grid = grid.resolve(&ORBIT_DEFAULT)?;
            let tol = tol.unwrap_or(1e-9);
            let r = reconstruct_g(&c);
            let g = c.g().clone();
            let report = residual_sweep(&grid, true, |x| {
                Ok(r.evaluate(x)? - g.evaluate(x)?)
            })?;
            emit_trace(&report, io.trace.as_deref())?;
            let pass = report.passes(tol);
            emit_json(
                &json!({
                    "operation": "reconstruct",
                    "residual": stripped(&report),
                    "tol": tol,
                    "pass": pass,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(pass))
        }
    }
}

fn run_branch(cmd: BranchCmd) -> Result<i32, CliError> {
    match cmd {
        BranchCmd::Build {
            conjugacy,
            periodic,
            io,
        } => {
            let c = load_conjugacy(&conjugacy)?;
            let p = load_periodic(&periodic)?;
            let h = build_branch(&c, &p)?;
            let report = json!({
                "operation": "build",
                "period": p.period(),
                "positive_displacement": p.certify_positive(),
            });
            emit_constructed(&h, report, &io)?;
            Ok(0)
        }
        BranchCmd::Extract {
            h,
            conjugacy,
            samples,
            tol,
            io,
        } => {
            let h = load_function(&h)?;
            let c = load_conjugacy(&conjugacy)?;
            let tol = tol.unwrap_or(1e-8);
            let (periodic, periodicity) = extract_periodic(&h, &c, samples)?;
            emit_trace(&periodicity, io.trace.as_deref())?;
            let pass = periodicity.passes(tol);
            let periodic_value = serde_json::to_value(&periodic)
                .map_err(|e| CliError(format!("serialization failed: {e}")))?;
            let report = json!({
                "operation": "extract",
                "samples": samples,
                "periodicity_defect": stripped(&periodicity),
                "tol": tol,
                "pass": pass,
            });
            match &io.out {
                Some(path) => {
                    emit_json(&periodic_value, Some(path))?;
                    emit_json(&report, None)?;
                }
                None => emit_json(&periodic_value, None)?,
            }
            Ok(verdict_code(pass))
        }
    }
}

fn run_analyze(cmd: AnalyzeCmd) -> Result<i32, CliError> {
    match cmd {
        AnalyzeCmd::Theorem1 {
            psi,
            f,
            tol,
            grid,
            io,
        } => {
            let generator = Generator::validate(load_function(&psi)?)?;
            let candidate = match f {
                Some(f) => candidate_of(load_function(&f)?)?,
                None => corollary1_extend(&generator)?,
            };
            let grid = grid.resolve(&POSITIVE_DEFAULT)?;
            let tol = tol.unwrap_or(CLOSED_FORM_SOLVE_TOL);
            let (slope, homogeneity) = infer_homogeneity(&generator, &grid, HOMOGENEITY_X_SMALL)?;
            let decomposition = theorem1_decomposition(&generator, &candidate, &grid)?;
            emit_trace(&decomposition, io.trace.as_deref())?;
            let limit = limit_evidence(&generator.branch().conjugate_neg())?;
            let pass = homogeneity.passes(tol);
            emit_json(
                &json!({
                    "analysis": "theorem1",
                    "slope_estimate": slope,
                    "homogeneity_defect": stripped(&homogeneity),
                    "decomposition_defect": stripped(&decomposition),
                    "limit_evidence": limit,
                    "tol": tol,
                    "generator_homogeneous": pass,
                    "pass": pass,
                }),
                io.out.as_deref(),
            )?;
            Ok(verdict_code(pass))
        }
    }
}

fn run_explore(cmd: ExploreCmd) -> Result<i32, CliError> {
    match cmd {
        ExploreCmd::Eq13 {
            coeffs,
            amplitude,
            restarts,
            seed,
            delta,
            lambda,
            grid,
            io,
        } => {
            let config = SearchConfig {
                objective: Objective::Eq13,
                grid: grid.resolve(&EXPLORE_DEFAULT)?,
                coeff_count: coeffs,
                amplitude,
                restarts,
                delta,
                lambda,
                seed,
                ..SearchConfig::default()
            };
            let outcome = search(&config)?;
            if let Some(path) = io.trace.as_deref() {
                // per-iteration best penalized value; x is the iteration index
                let points: Vec<TracePoint> = outcome
                    .trace
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| TracePoint {
                        x: i as f64,
                        residual: v,
                    })
                    .collect();
                write_atomic(path, &trace_csv(&points, "x"))?;
            }
            let candidate_found =
                outcome.verdict == bowtie::explorer::VERDICT_CANDIDATE;
            emit_json(
                &json!({
                    "search": "eq13",
                    "best": outcome.best,
                    "best_residual": outcome.best_residual,
                    "best_restart": outcome.best_restart,
                    "converged_restarts": outcome.converged_restarts,
                    "iterations": outcome.trace.len(),
                    "verdict": outcome.verdict,
                    "note": outcome.note,
                }),
                io.out.as_deref(),
            )?;
            // finding a sub-tolerance candidate is the anomalous outcome
            Ok(verdict_code(!candidate_found))
        }
        ExploreCmd::Scan {
            a,
            amplitudes,
            coeffs,
            grid,
            io,
        } => {
            let config = SearchConfig {
                objective: Objective::Eq13,
                grid: grid.resolve(&EXPLORE_DEFAULT)?,
                coeff_count: coeffs,
                ..SearchConfig::default()
            };
            let scan = perturbation_scan(a, &amplitudes, &config)?;
            let mut csv = String::from("amplitude,residual\n");
            for (eps, r) in &scan {
                csv.push_str(&format!("{eps},{r}\n"));
            }
            emit_text(&csv, io.out.as_deref())?;
            Ok(0)
        }
    }
}
