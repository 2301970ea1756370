//! Property tests for the scale-free structure of the domain types and the
//! closed-form bounds.

use pepgrad_core::bounds::{
    bound_drori, bound_main, bound_nesterov, per_step_weight,
};
use pepgrad_core::interp::interp_residual;
use pepgrad_core::{classify_regime, IterateTriple, SmoothProblemSpec, StepSchedule, SQRT_3};
use proptest::prelude::*;

fn schedule_strategy(max_scaled: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01..max_scaled, 1..=8)
}

proptest! {
    #[test]
    fn classify_is_scale_invariant(steps in schedule_strategy(2.5), c in 0.1f64..10.0) {
        // classify(s, L) == classify(c*s, L/c)
        let l = 1.3;
        let a = classify_regime(&StepSchedule::new(steps.clone()).unwrap(), l);
        let scaled: Vec<f64> = steps.iter().map(|t| c * t).collect();
        let b = classify_regime(&StepSchedule::new(scaled).unwrap(), l / c);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn classify_monotone_under_shrinking(steps in schedule_strategy(2.5), c in 0.1f64..1.0) {
        // scaling all steps down never moves the class toward Outside
        let l = 1.0;
        let rank = |r| match r {
            pepgrad_core::RegimeClass::UnitOrBelow => 0,
            pepgrad_core::RegimeClass::MainTheorem => 1,
            pepgrad_core::RegimeClass::Conjecture => 2,
            pepgrad_core::RegimeClass::Outside => 3,
        };
        let full = classify_regime(&StepSchedule::new(steps.clone()).unwrap(), l);
        let shrunk: Vec<f64> = steps.iter().map(|t| c * t).collect();
        let small = classify_regime(&StepSchedule::new(shrunk).unwrap(), l);
        prop_assert!(rank(small) <= rank(full));
    }

    #[test]
    fn weight_dominates_nesterov_integrand(t in 0.01f64..1.73, l in 0.2f64..4.0) {
        // w(t) >= 4t - 2Lt^2 on the proven regime, the inequality behind
        // main <= nesterov
        let t = t / l;
        prop_assert!(per_step_weight(t, l) >= 4.0 * t - 2.0 * l * t * t - 1e-12);
    }

    #[test]
    fn main_bound_dominance(steps in schedule_strategy(1.72), d in 0.0f64..5.0) {
        let l = 1.0;
        let spec = SmoothProblemSpec::new(l, d).unwrap();
        let schedule = StepSchedule::new(steps.clone()).unwrap();
        let main = bound_main(&spec, &schedule).unwrap();
        let nest = bound_nesterov(&spec, &schedule).unwrap();
        prop_assert!(main <= nest + 1e-12);
        if steps.iter().all(|&t| t <= 1.0) {
            let drori = bound_drori(&spec, &schedule).unwrap();
            prop_assert!(main <= drori + 1e-12);
            if d > 0.0 {
                prop_assert!(main < drori);
            }
        }
    }

    #[test]
    fn weight_concavity_on_regime(a in 0.01f64..1.72, b in 0.01f64..1.72, lam in 0.0f64..1.0) {
        // midpoint concavity of the per-step weight on (0, sqrt(3)/L)
        let l = 1.0;
        let mid = lam * a + (1.0 - lam) * b;
        let lhs = per_step_weight(mid, l);
        let rhs = lam * per_step_weight(a, l) + (1.0 - lam) * per_step_weight(b, l);
        prop_assert!(lhs >= rhs - 1e-12);
    }

    #[test]
    fn bound_main_decreasing_in_each_step_weight(steps in schedule_strategy(1.7), idx in 0usize..8, bump in 0.01f64..0.2) {
        // increasing a step's weight strictly decreases the bound
        let l = 1.0;
        let spec = SmoothProblemSpec::new(l, 1.0).unwrap();
        let idx = idx % steps.len();
        let schedule = StepSchedule::new(steps.clone()).unwrap();
        let before_w = per_step_weight(steps[idx], l);
        let mut moved = steps.clone();
        moved[idx] = (moved[idx] + bump).min(1.154); // toward the weight peak
        let after_w = per_step_weight(moved[idx], l);
        prop_assume!(after_w > before_w + 1e-12);
        let b0 = bound_main(&spec, &schedule).unwrap();
        let b1 = bound_main(&spec, &StepSchedule::new(moved).unwrap()).unwrap();
        prop_assert!(b1 < b0);
    }

    #[test]
    fn residual_translation_invariance(xa in -3.0f64..3.0, xb in -3.0f64..3.0,
                                       shift_x in -5.0f64..5.0, shift_f in -5.0f64..5.0) {
        // triples sampled from a mild quadratic, then translated
        let mk = |x: f64| IterateTriple::scalar(x, 0.5 * x, 0.25 * x * x);
        let a = mk(xa);
        let b = mk(xb);
        let r0 = interp_residual(&a, &b, 1.0).unwrap();
        let translate = |t: &IterateTriple| IterateTriple::scalar(
            t.x[0] + shift_x, t.g[0], t.f + shift_f,
        );
        let r1 = interp_residual(&translate(&a), &translate(&b), 1.0).unwrap();
        prop_assert!((r0 - r1).abs() <= 1e-9 * r0.abs().max(1.0));
    }

    #[test]
    fn quadratics_inside_class_interpolate(curv in -1.0f64..1.0, xa in -2.0f64..2.0, xb in -2.0f64..2.0) {
        // both ordered residuals are nonnegative for samples of
        // f = (curv/2) x^2 with |curv| <= L = 1
        let mk = |x: f64| IterateTriple::scalar(x, curv * x, 0.5 * curv * x * x);
        let a = mk(xa);
        let b = mk(xb);
        prop_assert!(interp_residual(&a, &b, 1.0).unwrap() >= -1e-12);
        prop_assert!(interp_residual(&b, &a, 1.0).unwrap() >= -1e-12);
    }
}

#[test]
fn regime_boundary_constant_squares_to_three() {
    assert!((SQRT_3 * SQRT_3 - 3.0).abs() < 1e-15);
}
