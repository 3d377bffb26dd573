//! Property tests for the structural invariants: exact dualities, cone
//! closure, interpolant inversion, periodic wrap-around, and residual-report
//! reduction.

use proptest::prelude::*;

use bowtie::funcalg::{
    cone_check, residual_sweep, Grid, Interval, MonotoneInterpolant, RealFunction, ResidualReport,
    TracePoint,
};
use bowtie::solutions::{
    broken_candidate, eq1_pointwise, eq1_residual, homogeneous_solution, rotate_dual,
};
use bowtie::verify::eq13_residual;

fn small_symmetric() -> Grid {
    Grid::symmetric_log(1e-3, 1e3, 64)
}

/// A modest closed-form family of full-line functions.
fn function_strategy() -> impl Strategy<Value = RealFunction> {
    prop_oneof![
        (-0.95..0.95f64).prop_map(RealFunction::linear),
        (0.1..0.9f64, 0.0..0.05f64)
            .prop_map(|(b, amp)| RealFunction::sin_log_slope(b, amp)),
        (0.1..0.9f64, 0.1..0.9f64).prop_map(|(a, b)| {
            RealFunction::piecewise(RealFunction::linear(a), RealFunction::linear(b)).unwrap()
        }),
    ]
}

fn nonzero_x() -> impl Strategy<Value = f64> {
    (1e-3..1e3f64, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
}

proptest! {
    #[test]
    fn conjugation_is_a_bitwise_involution(f in function_strategy(), x in nonzero_x()) {
        let twice = f.conjugate_neg().conjugate_neg();
        prop_assert_eq!(twice.evaluate(x).unwrap(), f.evaluate(x).unwrap());
    }

    #[test]
    fn displacement_exchanges_with_conjugation_bitwise(
        f in function_strategy(),
        x in nonzero_x(),
    ) {
        // (id − g)^{−id} = id − g^{−id}
        let lhs = f.displacement().conjugate_neg();
        let rhs = f.conjugate_neg().displacement();
        prop_assert_eq!(lhs.evaluate(x).unwrap(), rhs.evaluate(x).unwrap());
    }

    #[test]
    fn double_displacement_is_the_identity_bitwise(f in function_strategy(), x in nonzero_x()) {
        let twice = f.displacement().displacement();
        prop_assert_eq!(twice.evaluate(x).unwrap(), f.evaluate(x).unwrap());
    }

    #[test]
    fn rotation_reflects_and_negates_the_equation_defect(
        a in 0.15..0.85f64,
        b in 0.3..0.7f64,
        amp_frac in 0.0..0.8f64,
        x in nonzero_x(),
    ) {
        let amp = amp_frac * (b.min(1.0 - b) - 0.05).max(0.0);
        let c = broken_candidate(a, b, amp).unwrap();
        let rot = rotate_dual(&c).unwrap();
        let lhs = eq1_pointwise(rot.function(), x).unwrap();
        let rhs = eq1_pointwise(c.function(), -x).unwrap();
        prop_assert_eq!(lhs, -rhs);
    }

    #[test]
    fn two_slope_candidates_solve_the_equation(a in 0.05..0.95f64, b in 0.05..0.95f64) {
        let c = homogeneous_solution(a, b).unwrap();
        let r = eq1_residual(c.function(), &small_symmetric()).unwrap();
        prop_assert!(r.sup <= 1e-9, "sup = {}", r.sup);
    }

    #[test]
    fn eq13_holds_for_cone_interior_linear_maps(a in 0.05..0.95f64) {
        let g = RealFunction::linear(a).restrict_pos();
        let r = eq13_residual(&g, &Grid::log_spaced(1e-3, 1e3, 64)).unwrap();
        prop_assert!(r.sup <= 1e-9, "sup = {}", r.sup);
    }

    #[test]
    fn cone_membership_is_preserved_by_conjugation(
        b in 0.1..0.9f64,
        amp_frac in 0.0..0.9f64,
    ) {
        let amp = amp_frac * b.min(1.0 - b);
        let g = RealFunction::sin_log_slope(b, amp);
        let pos = Grid::log_spaced(1e-3, 1e3, 64);
        let direct = cone_check(&g.restrict_pos(), Interval::POS, &pos, true).unwrap();
        let conj = cone_check(
            &g.restrict_pos().conjugate_neg(),
            Interval::NEG,
            &pos.reflected(),
            true,
        )
        .unwrap();
        prop_assert_eq!(direct.member, conj.member);
        prop_assert_eq!(direct.strict, conj.strict);
    }

    #[test]
    fn interpolant_inversion_round_trips(
        steps in proptest::collection::vec((0.01..1.0f64, 0.01..1.0f64), 3..20),
        t in 0.0..1.0f64,
    ) {
        // accumulate strictly increasing nodes and values
        let mut nodes = vec![0.0];
        let mut values = vec![0.0];
        for (dn, dv) in &steps {
            nodes.push(nodes.last().unwrap() + dn);
            values.push(values.last().unwrap() + dv);
        }
        let interp = MonotoneInterpolant::increasing(nodes.clone(), values).unwrap();
        let lo = nodes[0];
        let hi = *nodes.last().unwrap();
        let x = lo + t * (hi - lo);
        let y = interp.evaluate(x).unwrap();
        let back = interp.inverse_evaluate(y).unwrap();
        prop_assert!((back - x).abs() <= 1e-9 * x.abs().max(1.0), "{x} -> {y} -> {back}");
    }

    #[test]
    fn residual_report_sup_is_the_trace_maximum(
        residuals in proptest::collection::vec(-1e3..1e3f64, 1..64),
    ) {
        let grid = Grid::linear(1.0, 2.0, residuals.len().max(2));
        let points: Vec<TracePoint> = residuals
            .iter()
            .enumerate()
            .map(|(i, &r)| TracePoint { x: i as f64, residual: r })
            .collect();
        let report = ResidualReport::from_trace(points.clone(), &grid, true);
        let max = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        prop_assert_eq!(report.sup, max);
        let at_argmax = points.iter().find(|p| p.x == report.argmax).unwrap();
        prop_assert_eq!(at_argmax.residual.abs(), max);
    }

    #[test]
    fn residual_sweep_rejects_nothing_on_finite_inputs(scale in 0.1..10.0f64) {
        let grid = Grid::log_spaced(1e-2, 1e2, 32);
        let report = residual_sweep(&grid, true, |x| Ok(scale * x)).unwrap();
        prop_assert_eq!(report.trace.as_ref().unwrap().len(), 32);
        prop_assert_eq!(report.sup, scale * 1e2);
    }

    #[test]
    fn symmetric_grids_reflect_onto_themselves(points in 4usize..64) {
        let grid = Grid::symmetric_log(1e-3, 1e3, points);
        let reflected = grid.reflected();
        let mut back: Vec<f64> = reflected.points().iter().map(|&x| -x).collect();
        back.sort_by(f64::total_cmp);
        prop_assert_eq!(back, grid.points().to_vec());
    }
}
