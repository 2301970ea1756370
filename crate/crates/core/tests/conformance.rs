//! Cross-module consistency: the closed forms, the semidefinite solver, the
//! dual certificates, and the constructed worst-case instances must all
//! agree with one another wherever their regimes overlap.

use pepgrad_core::bounds::{bound_conjecture, bound_main};
use pepgrad_core::certify::{build_certificate, verify_certificate};
use pepgrad_core::interp::{check_interpolation, descent_lemma_check, extension_minimum};
use pepgrad_core::pep::{assemble_pep, pair_value_direct};
use pepgrad_core::sdp::{extract_gram_vectors, solve, solve_instance, SdpStatus, SolveOptions};
use pepgrad_core::tight::{attainment_check, build_tight_instance, export_triples, run_gd};
use pepgrad_core::{SmoothProblemSpec, StepSchedule, SQRT_3};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn spec(l: f64, d: f64) -> SmoothProblemSpec {
    SmoothProblemSpec::new(l, d).unwrap()
}

#[test]
fn sdp_equals_closed_form_on_short_step_grid() {
    let opts = SolveOptions::default();
    for n in 1..=4usize {
        for &t in &[0.25, 0.5, 0.75, 1.0] {
            let sp = spec(1.0, 1.0);
            let schedule = StepSchedule::constant(t, n).unwrap();
            let sol = solve_instance(&sp, &schedule, &opts).unwrap();
            let closed = bound_main(&sp, &schedule).unwrap();
            assert_eq!(sol.status, SdpStatus::Optimal, "t={t} n={n}");
            assert!(
                (sol.sqrt_ell() - closed).abs() <= 1e-5,
                "t={t} n={n}: sdp {} vs closed {closed}",
                sol.sqrt_ell()
            );
        }
    }
}

#[test]
fn certificate_bound_dominates_sdp_value() {
    // weak duality: the certified bound is an upper bound on the SDP
    // optimum, with equality on the short-step regime
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let opts = SolveOptions::default();
    for _ in 0..10 {
        let n: usize = rng.random_range(1..=5);
        let l: f64 = [0.5, 1.0, 4.0][rng.random_range(0..3)];
        let d: f64 = rng.random_range(0.5..3.0);
        let steps: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0.05..SQRT_3 - 0.05) / l)
            .collect();
        let sp = spec(l, d);
        let schedule = StepSchedule::new(steps.clone()).unwrap();
        let cert = build_certificate(&sp, &schedule).unwrap();
        assert!(verify_certificate(&cert, &sp, &schedule, 1e-10).verified());
        let sol = solve_instance(&sp, &schedule, &opts).unwrap();
        assert!(cert.u.sqrt() >= sol.sqrt_ell() - 1e-5);
        if steps.iter().all(|&t| t * l <= 1.0) {
            assert!((cert.u.sqrt() - sol.sqrt_ell()).abs() <= 1e-5);
        }
    }
}

#[test]
fn sdp_below_conjectured_bound_past_proven_regime() {
    let sp = spec(1.0, 1.0);
    let opts = SolveOptions::default();
    for &t in &[1.75, 1.8, 1.9] {
        let schedule = StepSchedule::constant(t, 2).unwrap();
        let sol = solve_instance(&sp, &schedule, &opts).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        let conj = bound_conjecture(&sp, &schedule).unwrap();
        assert!(sol.sqrt_ell() <= conj.value() + 1e-5);
    }
}

#[test]
fn tight_instance_triples_satisfy_interpolation_both_ways() {
    let sp = spec(1.0, 2.0);
    let schedule = StepSchedule::constant(1.0, 4).unwrap();
    let inst = build_tight_instance(&sp, &schedule).unwrap();
    let set = export_triples(&inst);
    // consecutive pairs via the direct evaluator as well
    let check = check_interpolation(&set, 1e-10);
    assert!(check.ok);
    let m = extension_minimum(&set).unwrap();
    assert!(m.f_min.abs() < 1e-10);
}

#[test]
fn perturbed_tight_instance_breaks_interpolation() {
    // at the worst case some interpolation constraint is binding, so
    // lowering the first value slightly must create a violation
    let sp = spec(1.0, 2.0);
    let schedule = StepSchedule::constant(1.0, 4).unwrap();
    let inst = build_tight_instance(&sp, &schedule).unwrap();
    let mut set = export_triples(&inst);
    set.triples[0].f -= 1e-8;
    let check = check_interpolation(&set, 1e-9);
    assert!(!check.ok);
    assert!(!check.violations.is_empty());
}

#[test]
fn descent_lemma_holds_along_tight_instance() {
    let sp = spec(1.0, 2.0);
    let schedule = StepSchedule::constant(1.0, 4).unwrap();
    let inst = build_tight_instance(&sp, &schedule).unwrap();
    let set = export_triples(&inst);
    for triple in &set.triples {
        let x_step = triple.x[0] - triple.g[0] / sp.lipschitz;
        let (f_step, _) = inst.f.evaluate(x_step);
        assert!(descent_lemma_check(triple, f_step, sp.lipschitz));
        // a value artificially above the guaranteed level must be rejected
        let above = triple.f - triple.g[0] * triple.g[0] / (2.0 * sp.lipschitz) + 2e-9;
        assert!(!descent_lemma_check(triple, above, sp.lipschitz));
    }
}

#[test]
fn run_gd_against_sdp_worst_case_extraction() {
    // extract gradient vectors from the solved Gram matrix and re-check all
    // pair expressions directly on them
    let sp = spec(1.0, 1.0);
    let schedule = StepSchedule::new(vec![0.4, 0.9, 0.6]).unwrap();
    let program = assemble_pep(&sp, &schedule);
    let sol = solve(&program, &SolveOptions::default()).unwrap();
    assert_eq!(sol.status, SdpStatus::Optimal);
    let grads = extract_gram_vectors(&sol.gram, 1e-8).unwrap();
    let n1 = program.gram_dim();
    for i in 1..=n1 {
        for j in 1..=n1 {
            if i != j {
                let v =
                    pair_value_direct(i, j, &schedule, sp.lipschitz, &grads, &sol.f).unwrap();
                assert!(v >= -1e-6);
            }
        }
    }
}

#[test]
fn attainment_equals_sdp_on_short_steps() {
    // three-way agreement: closed form == attained value == SDP optimum
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let n: usize = rng.random_range(1..=4);
        let l: f64 = [1.0, 2.0][rng.random_range(0..2)];
        let d: f64 = rng.random_range(0.5..3.0);
        let steps: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..0.98) / l).collect();
        let sp = spec(l, d);
        let schedule = StepSchedule::new(steps).unwrap();
        let closed = bound_main(&sp, &schedule).unwrap();
        let att = attainment_check(&sp, &schedule, 1e-9).unwrap();
        assert!(att.exact);
        let sol = solve_instance(&sp, &schedule, &SolveOptions::default()).unwrap();
        assert!((closed - att.attained).abs() <= 1e-9 * closed.max(1.0));
        assert!((closed - sol.sqrt_ell()).abs() <= 1e-5);
    }
}

#[test]
fn gd_trajectory_gram_is_feasible_for_the_program() {
    // the tight trajectory, packed as Gram data, is feasible and attains the
    // program optimum
    let sp = spec(1.0, 2.0);
    let schedule = StepSchedule::constant(1.0, 4).unwrap();
    let inst = build_tight_instance(&sp, &schedule).unwrap();
    let run = run_gd(
        |x| {
            let (v, d) = inst.f.evaluate(x[0]);
            Ok((v, vec![d]))
        },
        &[inst.x1],
        &schedule,
    )
    .unwrap();
    let grads: Vec<Vec<f64>> = run.trajectory.iter().map(|t| t.g.clone()).collect();
    let f_vals: Vec<f64> = run.trajectory.iter().map(|t| t.f).collect();
    let gram = pepgrad_core::pep::gram_of(&grads);
    let ell = run.min_grad_norm * run.min_grad_norm;
    let program = assemble_pep(&sp, &schedule);
    for s in program.slacks(&f_vals, ell, &gram) {
        assert!(s >= -1e-9);
    }
}
