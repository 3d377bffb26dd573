use serde::{Deserialize, Serialize};

/// Standard Nelder–Mead parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadParams {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Terminate when the simplex diameter falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for NelderMeadParams {
    fn default() -> NelderMeadParams {
        NelderMeadParams {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            tolerance: 1e-10,
            max_iterations: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective value after each iteration.
    pub trace: Vec<f64>,
}

/// Derivative-free simplex minimization of `f` from `x0` with initial step
/// `step` in each coordinate.
pub fn minimize(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    params: &NelderMeadParams,
) -> MinimizeResult {
    let n = x0.len();
    assert!(n > 0, "minimize needs at least one dimension");

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        let v = f(&p);
        simplex.push((p, v));
    }

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    for _ in 0..params.max_iterations {
        iterations += 1;
        simplex.sort_by(|a, b| f64::total_cmp(&a.1, &b.1));
        trace.push(simplex[0].1);

        let mut diameter: f64 = 0.0;
        for s in &simplex[1..] {
            let d = s
                .0
                .iter()
                .zip(&simplex[0].0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            diameter = diameter.max(d);
        }
        if diameter < params.tolerance {
            converged = true;
            break;
        }

        let worst = simplex[n].clone();
        let second_worst = simplex[n - 1].1;
        let best = simplex[0].1;

        let mut centroid = vec![0.0; n];
        for s in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(&s.0) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let refl = along(params.reflection);
        let refl_v = f(&refl);
        if refl_v < best {
            let exp = along(params.expansion);
            let exp_v = f(&exp);
            simplex[n] = if exp_v < refl_v {
                (exp, exp_v)
            } else {
                (refl, refl_v)
            };
        } else if refl_v < second_worst {
            simplex[n] = (refl, refl_v);
        } else {
            let contr = if refl_v < worst.1 {
                along(params.contraction)
            } else {
                along(-params.contraction)
            };
            let contr_v = f(&contr);
            if contr_v < worst.1.min(refl_v) {
                simplex[n] = (contr, contr_v);
            } else {
                // shrink toward the best vertex
                let best_point = simplex[0].0.clone();
                for s in simplex[1..].iter_mut() {
                    for (v, b) in s.0.iter_mut().zip(&best_point) {
                        *v = b + params.shrink * (*v - b);
                    }
                    s.1 = f(&s.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| f64::total_cmp(&a.1, &b.1));
    let (x, value) = simplex.swap_remove(0);
    MinimizeResult {
        x,
        value,
        iterations,
        converged,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_a_quadratic_bowl() {
        let mut f = |p: &[f64]| (p[0] - 1.5).powi(2) + 3.0 * (p[1] + 0.5).powi(2);
        let r = minimize(&mut f, &[0.0, 0.0], 0.5, &NelderMeadParams::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.5).abs() < 1e-6 && (r.x[1] + 0.5).abs() < 1e-6, "{:?}", r.x);
        assert!(r.value < 1e-10);
    }

    #[test]
    fn handles_infinite_penalty_regions() {
        let mut f = |p: &[f64]| {
            if p[0] < 0.0 {
                f64::INFINITY
            } else {
                (p[0] - 0.2).powi(2)
            }
        };
        let r = minimize(&mut f, &[1.0], 0.5, &NelderMeadParams::default());
        assert!((r.x[0] - 0.2).abs() < 1e-6, "{:?}", r.x);
    }

    #[test]
    fn trace_is_monotone_nonincreasing() {
        let mut f = |p: &[f64]| p.iter().map(|v| v * v).sum::<f64>();
        let r = minimize(&mut f, &[2.0, -3.0, 1.0], 1.0, &NelderMeadParams::default());
        for w in r.trace.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn rosenbrock_reaches_the_valley() {
        let mut f = |p: &[f64]| {
            let (x, y) = (p[0], p[1]);
            (1.0 - x).powi(2) + 100.0 * (y - x * x).powi(2)
        };
        let mut params = NelderMeadParams::default();
        params.max_iterations = 5000;
        let r = minimize(&mut f, &[-1.2, 1.0], 0.5, &params);
        assert!(r.value < 1e-8, "value = {}", r.value);
    }
}
