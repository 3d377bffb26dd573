//! Acceptance gate: one check per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use bowtie::abel::{
    build_branch, extract_periodic, reconstruct_g, solve_abel, theorem2_construct,
    PeriodicFunction, SeedProfile,
};
use bowtie::explorer::{search, SearchConfig, VERDICT_NO_CANDIDATE, VERDICT_THRESHOLD};
use bowtie::funcalg::{commutator_residual, Grid, Interval, MonotoneInterpolant, RealFunction};
use bowtie::jsonspec::FunctionSpec;
use bowtie::solutions::{
    broken_candidate, corollary1_extend, displacement_dual, eq1_pointwise, eq1_residual,
    homogeneous_solution, lemma_residuals, rotate_dual, CandidateSolution, Generator,
};
use bowtie::verify::{eq13_residual, sablik_residual, DecompositionPair};

type CheckResult = Result<String, String>;

/// Random strict cone-interior generator on ℝ₋: a log-sinusoidal profile
/// sampled on mirrored log nodes, closed with a node at 0.
fn random_generator(rng: &mut ChaCha20Rng) -> Generator {
    let c: f64 = rng.random_range(0.25..0.75);
    let amp = rng.random_range(0.0..0.5 * c.min(1.0 - c));
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let n = 129;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..n {
        let l = 6.0 - 12.0 * i as f64 / (n - 1) as f64;
        let x = -(10f64.powf(l));
        nodes.push(x);
        values.push(x * (c + amp * ((-x).ln() + theta).sin()));
    }
    nodes.push(0.0);
    values.push(0.0);
    let interp = MonotoneInterpolant::increasing(nodes, values).expect("monotone by construction");
    Generator::validate(RealFunction::interpolant(interp)).expect("cone-interior by construction")
}

fn closed_form_generators() -> Vec<Generator> {
    let mut gens: Vec<Generator> = (1..=9)
        .map(|k| {
            Generator::validate(RealFunction::linear(k as f64 / 10.0).restrict_neg()).unwrap()
        })
        .collect();
    gens.push(Generator::validate(RealFunction::rational_neg()).unwrap());
    gens
}

/// Shared 50-candidate corpus: solutions and deliberate non-solutions.
fn corpus() -> Vec<CandidateSolution> {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let mut v = Vec::with_capacity(50);
    for _ in 0..9 {
        let a = rng.random_range(0.1..0.9);
        let b = rng.random_range(0.1..0.9);
        v.push(homogeneous_solution(a, b).unwrap());
    }
    for gen in closed_form_generators() {
        v.push(corollary1_extend(&gen).unwrap());
    }
    for _ in 0..15 {
        let a = rng.random_range(0.2..0.8);
        let b: f64 = rng.random_range(0.2..0.8);
        let amp = rng.random_range(0.05..b.min(1.0 - b) - 0.02);
        v.push(broken_candidate(a, b, amp).unwrap());
    }
    for _ in 0..16 {
        v.push(corollary1_extend(&random_generator(&mut rng)).unwrap());
    }
    assert_eq!(v.len(), 50);
    v
}

fn budget(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:.2?}, budget {limit:?}"))
    }
}

fn criterion_1_corollary1_soundness() -> CheckResult {
    let start = Instant::now();
    let grid = Grid::default_symmetric();
    let mut worst_closed = 0.0f64;
    for gen in closed_form_generators() {
        let c = corollary1_extend(&gen).map_err(|e| e.to_string())?;
        let r = eq1_residual(c.function(), &grid).map_err(|e| e.to_string())?;
        worst_closed = worst_closed.max(r.sup);
        if r.sup > 1e-12 {
            return Err(format!("closed-form extension sup {} > 1e-12", r.sup));
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let mut worst_interp = 0.0f64;
    for k in 0..100 {
        let gen = random_generator(&mut rng);
        let c = corollary1_extend(&gen).map_err(|e| e.to_string())?;
        let r = eq1_residual(c.function(), &grid).map_err(|e| e.to_string())?;
        worst_interp = worst_interp.max(r.sup);
        if r.sup > 1e-6 {
            return Err(format!("interpolant extension {k} sup {} > 1e-6", r.sup));
        }
    }
    budget(start.elapsed(), Duration::from_secs(10), "criterion 1")?;
    Ok(format!(
        "closed-form sup {worst_closed:.2e}, interpolant sup {worst_interp:.2e}, {:.2?}",
        start.elapsed()
    ))
}

fn criterion_2_exact_dualities() -> CheckResult {
    let start = Instant::now();
    let sym = Grid::default_symmetric();
    let pos = Grid::default_positive();
    let mut worst = 0.0f64;
    for (i, c) in corpus().iter().enumerate() {
        let rot = rotate_dual(c).map_err(|e| e.to_string())?;
        for &x in sym.points() {
            let a = eq1_pointwise(rot.function(), x).map_err(|e| e.to_string())?;
            let b = eq1_pointwise(c.function(), -x).map_err(|e| e.to_string())?;
            let d = (a.abs() - b.abs()).abs();
            worst = worst.max(d);
            if d > 1e-12 {
                return Err(format!("candidate {i}: rotation identity off by {d} at x = {x}"));
            }
        }
        let dual = displacement_dual(c).map_err(|e| e.to_string())?;
        let (r1, r2) = lemma_residuals(c, &pos).map_err(|e| e.to_string())?;
        let (s1, s2) = lemma_residuals(&dual, &pos).map_err(|e| e.to_string())?;
        let pairs = [(&r1, &s2), (&r2, &s1)];
        for (a, b) in pairs {
            let (ta, tb) = (a.trace.as_deref().unwrap(), b.trace.as_deref().unwrap());
            for (p, q) in ta.iter().zip(tb) {
                let d = (p.residual.abs() - q.residual.abs()).abs();
                worst = worst.max(d);
                if d > 1e-12 {
                    return Err(format!(
                        "candidate {i}: lemma swap off by {d} at x = {}",
                        p.x
                    ));
                }
            }
        }
    }
    budget(start.elapsed(), Duration::from_secs(5), "criterion 2")?;
    Ok(format!("worst per-point deviation {worst:.2e}, {:.2?}", start.elapsed()))
}

fn criterion_3_lemma_iff() -> CheckResult {
    let sym = Grid::default_symmetric();
    let pos = Grid::default_positive();
    let mut solutions = 0;
    let mut non_solutions = 0;
    for (i, c) in corpus().iter().enumerate() {
        let (r1, r2) = lemma_residuals(c, &pos).map_err(|e| e.to_string())?;
        let lemma_max = r1.sup.max(r2.sup);
        let eq1 = eq1_residual(c.function(), &sym).map_err(|e| e.to_string())?.sup;
        if r1.sup <= 1e-9 && r2.sup <= 1e-9 {
            solutions += 1;
            if eq1 > 1e-8 {
                return Err(format!(
                    "candidate {i}: lemma residuals ({}, {}) pass but eq1 sup {eq1}",
                    r1.sup, r2.sup
                ));
            }
        }
        if eq1 >= 1e-3 {
            non_solutions += 1;
            if lemma_max < 1e-4 {
                return Err(format!(
                    "candidate {i}: eq1 sup {eq1} but max lemma residual {lemma_max}"
                ));
            }
        }
    }
    Ok(format!(
        "{solutions} solution-side and {non_solutions} failure-side members, zero misclassifications"
    ))
}

fn criterion_4_abel_solver() -> CheckResult {
    let start = Instant::now();
    let mut maps: Vec<(String, RealFunction)> = [0.2, 0.5, 0.8]
        .iter()
        .map(|&a| (format!("{a}·id"), RealFunction::linear(a)))
        .collect();
    maps.push((
        "x(1+x)/(2+x)".to_string(),
        RealFunction::custom("x(1+x)/(2+x)", Interval::POS, |x| x * (1.0 + x) / (2.0 + x)),
    ));
    let residual_grid = Grid::log_spaced(1e-4, 1e4, 257);
    let compare_grid = Grid::log_spaced(1e-4, 1e4, 33);
    for (name, g) in maps {
        let c = Arc::new(
            solve_abel(g.clone(), 1.0, 1.0, SeedProfile::Linear).map_err(|e| e.to_string())?,
        );
        let res = c.abel_residual(&residual_grid).map_err(|e| e.to_string())?;
        if res.sup > 1e-9 {
            return Err(format!("{name}: Abel residual {} > 1e-9", res.sup));
        }
        let r = reconstruct_g(&c);
        let c2 = Arc::new(
            solve_abel(g.clone(), 1.0, 1.0, SeedProfile::Smoothstep).map_err(|e| e.to_string())?,
        );
        let r2 = reconstruct_g(&c2);
        for &x in compare_grid.points() {
            let gx = g.evaluate(x).map_err(|e| e.to_string())?;
            let rx = r.evaluate(x).map_err(|e| e.to_string())?;
            if (rx - gx).abs() > 1e-9 {
                return Err(format!("{name}: reconstruct off by {} at x = {x}", (rx - gx).abs()));
            }
            let r2x = r2.evaluate(x).map_err(|e| e.to_string())?;
            if (rx - r2x).abs() > 1e-9 {
                return Err(format!(
                    "{name}: gauges disagree by {} at x = {x}",
                    (rx - r2x).abs()
                ));
            }
        }
    }
    budget(start.elapsed(), Duration::from_secs(5), "criterion 4")?;
    Ok(format!("four maps, two gauges each, {:.2?}", start.elapsed()))
}

fn criterion_5_proposition2_round_trip() -> CheckResult {
    let c = Arc::new(
        solve_abel(RealFunction::linear(0.5), 1.0, 1.0, SeedProfile::Log)
            .map_err(|e| e.to_string())?,
    );
    let g_pos = RealFunction::linear(0.5).restrict_pos();
    let grid = Grid::log_spaced(1e-3, 1e3, 128);
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let samples = 512;
    for k in 0..20 {
        let constant = rng.random_range(0.7..1.3);
        let bound = (constant - 0.1) / 6.0;
        let cos: Vec<f64> = (0..3).map(|_| rng.random_range(-bound..bound)).collect();
        let sin: Vec<f64> = (0..3).map(|_| rng.random_range(-bound..bound)).collect();
        let p = PeriodicFunction::trig(1.0, constant, cos, sin).map_err(|e| e.to_string())?;
        let h = build_branch(&c, &p).map_err(|e| e.to_string())?;
        let (q, _) = extract_periodic(&h, &c, samples).map_err(|e| e.to_string())?;
        for j in 0..samples {
            let u = j as f64 / samples as f64;
            let d = (q.evaluate(u) - p.evaluate(u)).abs();
            if d > 1e-8 {
                return Err(format!("draw {k}: P recovery off by {d} at u = {u}"));
            }
        }
        let comm = commutator_residual(&g_pos, &h, &grid).map_err(|e| e.to_string())?;
        if comm.sup > 1e-8 {
            return Err(format!("draw {k}: [g, h] residual {} > 1e-8", comm.sup));
        }
    }
    Ok("20 draws round-trip within 1e-8 and commute within 1e-8".to_string())
}

fn criterion_6_theorem2_homogeneous_closure() -> CheckResult {
    let grid = Grid::log_spaced(1e-3, 1e3, 128);
    let compare = Grid::log_spaced(1e-3, 1e3, 65);
    for a in [0.3, 0.5, 0.7] {
        let gen = Generator::validate(RealFunction::linear(a).restrict_neg())
            .map_err(|e| e.to_string())?;
        for p in [0.5, 1.0, 1.7] {
            let p2 = PeriodicFunction::constant(1.0, p);
            let (cand, second) =
                theorem2_construct(&gen, &p2, &grid).map_err(|e| e.to_string())?;
            if second.sup > 1e-9 {
                return Err(format!(
                    "a = {a}, p = {p}: second commutator {} > 1e-9",
                    second.sup
                ));
            }
            let b = (1.0 - a).powf(p);
            for &x in compare.points() {
                let y = cand.function().evaluate(x).map_err(|e| e.to_string())?;
                let d = (y - b * x).abs();
                if d > 1e-9 * x.max(1.0) {
                    return Err(format!("a = {a}, p = {p}: f₊ off by {d} at x = {x}"));
                }
            }
        }
    }
    Ok("nine (a, p) pairs match (1−a)^p·id".to_string())
}

fn criterion_7_sablik_checks() -> CheckResult {
    let grid = Grid::log_spaced(1e-3, 1e3, 256);
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for k in 0..10 {
        let slope = 0.5f64.powi(rng.random_range(1..=3));
        let b: f64 = rng.random_range(0.2..0.8);
        let amp = rng.random_range(0.0..0.5 * b.min(1.0 - b));
        let r1 = RealFunction::sin_log_slope(b, amp).restrict_pos();
        let pair = DecompositionPair::from_displacement(r1, &grid).map_err(|e| e.to_string())?;
        let r = sablik_residual(&RealFunction::linear(slope), &pair, &grid)
            .map_err(|e| e.to_string())?;
        if r.sup != 0.0 {
            return Err(format!("pair {k}: linear residual {} is not exactly zero", r.sup));
        }
    }
    let pair = DecompositionPair::halves();
    let at_two = Grid::from_points(vec![2.0], "x=2").map_err(|e| e.to_string())?;
    let r = sablik_residual(&RealFunction::square().restrict_pos(), &pair, &at_two)
        .map_err(|e| e.to_string())?;
    if (r.sup - 2.0).abs() > 1e-12 {
        return Err(format!("square residual at 2 is {}, want 2", r.sup));
    }
    Ok(format!("10 exact zeros; square residual at 2 = {}", r.sup))
}

fn criterion_8_eq13_covanishing() -> CheckResult {
    let grid = Grid::log_spaced(1e-3, 1e3, 128);
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    let mut passes = 0;
    for k in 0..30 {
        let b: f64 = rng.random_range(0.2..0.8);
        let amp = if k % 2 == 0 {
            0.0
        } else {
            rng.random_range(0.02..b.min(1.0 - b) - 0.02)
        };
        let g = RealFunction::sin_log_slope(b, amp).restrict_pos();
        let eq13_pass = eq13_residual(&g, &grid).map_err(|e| e.to_string())?.sup <= 1e-8;
        let comm_pass = commutator_residual(&g, &g.displacement(), &grid)
            .map_err(|e| e.to_string())?
            .sup
            <= 1e-8;
        if eq13_pass != comm_pass {
            return Err(format!(
                "g {k} (b = {b}, amp = {amp}): eq13 verdict {eq13_pass}, commutator verdict {comm_pass}"
            ));
        }
        if eq13_pass {
            passes += 1;
        }
    }
    Ok(format!("30 verdict agreements ({passes} co-vanishing)"))
}

fn criterion_9_explorer_evidence() -> CheckResult {
    let config = SearchConfig::default();
    let start = Instant::now();
    let first = search(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    budget(elapsed, Duration::from_secs(60), "explorer search")?;
    if first.best_residual < 10.0 * VERDICT_THRESHOLD {
        return Err(format!(
            "best residual {} below 10× the verdict threshold",
            first.best_residual
        ));
    }
    if first.verdict != VERDICT_NO_CANDIDATE {
        return Err(format!("unexpected verdict: {}", first.verdict));
    }
    if !first.note.contains("not a proof") {
        return Err(format!("evidence note missing: {}", first.note));
    }
    let second = search(&config).map_err(|e| e.to_string())?;
    if first.trace != second.trace || first.best != second.best {
        return Err("re-run with the same seed is not bit-identical".to_string());
    }
    Ok(format!(
        "best residual {:.2e} after {} iterations, {elapsed:.2?}, deterministic re-run",
        first.best_residual,
        first.trace.len()
    ))
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bowtie"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run CLI: {e}"))?;
    let code = out.status.code().ok_or("CLI killed by signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn criterion_10_cli_end_to_end() -> CheckResult {
    let (code, stdout) = run_cli(&[
        "verify",
        "eq1",
        "--f",
        r#"{"kind":"linear","slope":0.5}"#,
        "--grid",
        "default",
    ])?;
    if code != 0 {
        return Err(format!("example 1: exit {code}, want 0"));
    }
    if !stdout.contains("\"sup\": 0.0") {
        return Err(format!("example 1: sup is not 0 in {stdout}"));
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let f_path = dir.path().join("f.json");
    let f_str = f_path.to_str().unwrap();
    let (code, _) = run_cli(&[
        "construct",
        "corollary1",
        "--phi",
        r#"{"kind":"rational_neg"}"#,
        "--out",
        f_str,
    ])?;
    if code != 0 {
        return Err(format!("example 2 construct: exit {code}, want 0"));
    }
    let (code, _) = run_cli(&["verify", "eq1", "--f", f_str])?;
    if code != 0 {
        return Err(format!("example 2 verify: exit {code}, want 0"));
    }

    let (code, _) = run_cli(&["verify", "eq13", "--g", r#"{"kind":"linear","slope":2.0}"#])?;
    if code != 2 {
        return Err(format!("example 3: exit {code}, want 2"));
    }

    // node-wise identical round-trip of the constructed function
    let text = std::fs::read_to_string(&f_path).map_err(|e| e.to_string())?;
    let spec: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let parsed: FunctionSpec = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let f = parsed.to_function().map_err(|e| e.to_string())?;
    let again = serde_json::to_value(FunctionSpec::from_function(&f).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    if spec != again {
        return Err("function spec does not round-trip identically".to_string());
    }
    let gen = Generator::validate(RealFunction::rational_neg()).map_err(|e| e.to_string())?;
    let expected = corollary1_extend(&gen).map_err(|e| e.to_string())?;
    for &x in Grid::default_symmetric().points() {
        let a = f.evaluate(x).map_err(|e| e.to_string())?;
        let b = expected.function().evaluate(x).map_err(|e| e.to_string())?;
        if a != b || a.to_bits() != b.to_bits() {
            return Err(format!("round-trip differs at x = {x}: {a} vs {b}"));
        }
    }
    Ok("three examples with stated exit codes; bitwise round-trip".to_string())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> CheckResult)> = vec![
        ("criterion 1 (corollary-1 soundness)", criterion_1_corollary1_soundness),
        ("criterion 2 (exact dualities)", criterion_2_exact_dualities),
        ("criterion 3 (lemma iff)", criterion_3_lemma_iff),
        ("criterion 4 (Abel solver)", criterion_4_abel_solver),
        ("criterion 5 (round-trip)", criterion_5_proposition2_round_trip),
        ("criterion 6 (homogeneous closure)", criterion_6_theorem2_homogeneous_closure),
        ("criterion 7 (conditional Cauchy)", criterion_7_sablik_checks),
        ("criterion 8 (co-vanishing verdicts)", criterion_8_eq13_covanishing),
        ("criterion 9 (explorer evidence)", criterion_9_explorer_evidence),
        ("criterion 10 (CLI end-to-end)", criterion_10_cli_end_to_end),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("{name}: PASS — {detail}"),
            Err(msg) => {
                println!("{name}: FAIL — {msg}");
                failures.push(format!("{name}: {msg}"));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
