//! Subcommand implementations. All output is deterministic: identical flags
//! produce byte-identical stdout and files.

use std::fs;

use pepgrad_core::bounds::{bound_main, bound_report};
use pepgrad_core::certify::{build_certificate, verify_certificate};
use pepgrad_core::interp::{check_interpolation, TripleSet};
use pepgrad_core::pep::assemble_pep;
use pepgrad_core::sdp::{solve, SdpStatus, SolveOptions};
use pepgrad_core::tight::{build_tight_instance, export_triples, run_gd, GdRun};
use pepgrad_core::{RegimeClass, SmoothProblemSpec, StepSchedule};

use crate::args::{
    BoundArgs, CertifyArgs, CheckInterpArgs, PepSolveArgs, SweepArgs, SweepParam, TightArgs,
};
use crate::error::CliError;
use crate::formats::{
    BoundReportJson, CertificateReportJson, InstanceEchoJson, PepProgramJson, PepSolveReportJson,
    PiecewiseQuadraticJson, SdpSolutionJson, TripleSetJson, trajectory_csv,
};
use crate::table::{render_rows, sig6};

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_sig6(v: Option<f64>) -> String {
    v.map(sig6).unwrap_or_else(|| "-".into())
}

pub fn cmd_bound(args: &BoundArgs) -> Result<(), CliError> {
    let spec = args.instance.spec()?;
    let schedule = args.instance.schedule()?;
    let report = bound_report(&spec, &schedule);
    if report.regime == RegimeClass::Outside {
        let worst = schedule
            .steps()
            .iter()
            .cloned()
            .fold(0.0f64, f64::max);
        return Err(CliError::Regime(format!(
            "step length {worst} with L = {} lies outside the required interval (0, 2/L)",
            spec.lipschitz
        )));
    }
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&BoundReportJson::from(&report))?
        );
    } else {
        let rows = vec![
            ("regime".to_string(), report.regime.as_str().to_string()),
            ("main".to_string(), opt_sig6(report.main)),
            ("nesterov".to_string(), opt_sig6(report.nesterov)),
            ("drori".to_string(), opt_sig6(report.drori)),
            ("taylor".to_string(), opt_sig6(report.taylor)),
            (
                "conjecture".to_string(),
                report
                    .conjecture
                    .map(|c| format!("{}  [CONJECTURE]", sig6(c.value())))
                    .unwrap_or_else(|| "-".into()),
            ),
        ];
        print!("{}", render_rows(&rows));
    }
    Ok(())
}

pub fn cmd_pep_solve(args: &PepSolveArgs) -> Result<(), CliError> {
    let spec = args.instance.spec()?;
    let schedule = args.instance.schedule()?;
    let program = assemble_pep(&spec, &schedule);
    if let Some(path) = &args.dump_program {
        fs::write(
            path,
            serde_json::to_string_pretty(&PepProgramJson::from(&program))?,
        )?;
    }
    let options = SolveOptions {
        gap_tol: args.gap_tol,
        feas_tol: args.gap_tol,
        ..SolveOptions::default()
    };
    let solution = solve(&program, &options)?;
    let closed_form = bound_main(&spec, &schedule).ok();
    let abs_diff = closed_form.map(|c| (solution.sqrt_ell() - c).abs());

    if args.json {
        let report = PepSolveReportJson {
            solution: SdpSolutionJson::from(&solution),
            closed_form,
            abs_diff,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        let rows = vec![
            ("status".to_string(), solution.status.as_str().to_string()),
            ("sdp_value".to_string(), sig6(solution.sqrt_ell())),
            ("ell".to_string(), sig6(solution.ell)),
            ("gap".to_string(), format!("{:.3e}", solution.gap)),
            ("iterations".to_string(), solution.iterations.to_string()),
            ("closed_form".to_string(), opt_sig6(closed_form)),
            (
                "abs_diff".to_string(),
                abs_diff
                    .map(|d| format!("{d:.3e}"))
                    .unwrap_or_else(|| "-".into()),
            ),
        ];
        print!("{}", render_rows(&rows));
    }
    if solution.status != SdpStatus::Optimal {
        return Err(CliError::Solver(format!(
            "solve finished with status {}",
            solution.status.as_str()
        )));
    }
    Ok(())
}

pub fn cmd_certify(args: &CertifyArgs) -> Result<(), CliError> {
    let spec = args.instance.spec()?;
    let schedule = args.instance.schedule()?;
    let cert = build_certificate(&spec, &schedule)?;
    let report = verify_certificate(&cert, &spec, &schedule, args.q_tol);
    let verified = report.verified();

    if args.json {
        let echo = InstanceEchoJson {
            lipschitz: spec.lipschitz,
            delta: spec.delta,
            steps: schedule.steps().to_vec(),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&CertificateReportJson::new(echo, &report, &cert))?
        );
    } else {
        let yn = |b: bool| if b { "yes" } else { "NO" }.to_string();
        let rows = vec![
            ("verified".to_string(), yn(verified)),
            ("certified_bound".to_string(), sig6(report.certified_bound)),
            (
                "multipliers_nonneg".to_string(),
                yn(report.multipliers_nonneg),
            ),
            (
                "sigma_sums_to_one".to_string(),
                yn(report.sigma_sums_to_one),
            ),
            (
                "linear_terms_vanish".to_string(),
                yn(report.linear_terms_vanish),
            ),
            (
                "quadratic_matches_q".to_string(),
                yn(report.quadratic_matches_q),
            ),
            ("residual_nsd".to_string(), yn(report.residual_nsd)),
        ];
        print!("{}", render_rows(&rows));
    }
    if !verified {
        return Err(CliError::Failed("certificate verification failed".into()));
    }
    Ok(())
}

pub fn cmd_tight(args: &TightArgs) -> Result<(), CliError> {
    let spec = args.instance.spec()?;
    let schedule = args.instance.schedule()?;
    let instance = build_tight_instance(&spec, &schedule)?;
    if let Some(path) = &args.out {
        fs::write(
            path,
            serde_json::to_string_pretty(&PiecewiseQuadraticJson::from(&instance.f))?,
        )?;
    }
    if let Some(path) = &args.triples_out {
        let set = export_triples(&instance);
        fs::write(path, serde_json::to_string_pretty(&TripleSetJson::from(&set))?)?;
    }
    if args.simulate {
        let run = simulate(&instance.f, instance.x1, &schedule)?;
        let bound = instance.u;
        let attained = run.min_grad_norm;
        let exact = (attained - bound).abs() <= 1e-9 * bound.max(1.0);
        if let Some(path) = &args.trajectory_out {
            fs::write(path, trajectory_csv(&run))?;
        }
        let rows = vec![
            ("bound".to_string(), sig6(bound)),
            ("attained".to_string(), sig6(attained)),
            ("exact".to_string(), exact.to_string()),
            ("x1".to_string(), sig6(instance.x1)),
        ];
        print!("{}", render_rows(&rows));
        if !exact {
            return Err(CliError::Failed(
                "attained value does not match the bound".into(),
            ));
        }
    } else if args.out.is_none() {
        // nothing else requested: summarize the construction
        let rows = vec![
            ("bound".to_string(), sig6(instance.u)),
            ("x1".to_string(), sig6(instance.x1)),
            (
                "anchors".to_string(),
                instance
                    .anchors
                    .iter()
                    .map(|a| sig6(*a))
                    .collect::<Vec<_>>()
                    .join(", "),
            ),
        ];
        print!("{}", render_rows(&rows));
    }
    Ok(())
}

fn simulate(
    f: &pepgrad_core::tight::PiecewiseQuadratic,
    x1: f64,
    schedule: &StepSchedule,
) -> Result<GdRun, CliError> {
    run_gd(
        |x| {
            let (v, d) = f.evaluate(x[0]);
            Ok((v, vec![d]))
        },
        &[x1],
        schedule,
    )
    .map_err(CliError::from)
}

struct SweepRow {
    grid_value: f64,
    main: Option<f64>,
    nesterov: Option<f64>,
    drori: Option<f64>,
    taylor: Option<f64>,
    conjecture: Option<f64>,
    sdp_value: Option<f64>,
    sdp_gap: Option<f64>,
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let values = sweep_grid(args)?;
    let mut rows = Vec::with_capacity(values.len());
    for &v in &values {
        let (spec, schedule) = sweep_instance(args, v)?;
        let report = bound_report(&spec, &schedule);
        let (sdp_value, sdp_gap) = if args.no_sdp {
            (None, None)
        } else {
            let options = SolveOptions {
                gap_tol: args.gap_tol,
                feas_tol: args.gap_tol,
                ..SolveOptions::default()
            };
            match solve(&assemble_pep(&spec, &schedule), &options) {
                Ok(sol) if sol.status == SdpStatus::Optimal => {
                    (Some(sol.sqrt_ell()), Some(sol.gap))
                }
                // a failed grid point leaves its cells empty rather than
                // aborting the sweep
                _ => (None, None),
            }
        };
        rows.push(SweepRow {
            grid_value: v,
            main: report.main,
            nesterov: report.nesterov,
            drori: report.drori,
            taylor: report.taylor,
            conjecture: report.conjecture.map(|c| c.value()),
            sdp_value,
            sdp_gap,
        });
    }

    let first_col = match args.param {
        SweepParam::Step => "t",
        SweepParam::N => "N",
        SweepParam::Delta => "delta",
    };
    let mut csv = format!(
        "{first_col},bound_main,bound_nesterov,bound_drori,bound_taylor,bound_conjecture,sdp_value,sdp_gap\n"
    );
    for row in &rows {
        let grid = if args.param == SweepParam::N {
            format!("{}", row.grid_value as usize)
        } else {
            row.grid_value.to_string()
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            grid,
            opt_cell(row.main),
            opt_cell(row.nesterov),
            opt_cell(row.drori),
            opt_cell(row.taylor),
            opt_cell(row.conjecture),
            opt_cell(row.sdp_value),
            opt_cell(row.sdp_gap),
        ));
    }
    match &args.out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn sweep_grid(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    if args.points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if args.points > 1 && !(args.from < args.to) {
        return Err(CliError::Usage(
            "--from must be strictly below --to".into(),
        ));
    }
    let mut values = Vec::with_capacity(args.points);
    if args.points == 1 {
        values.push(args.from);
    } else {
        let h = (args.to - args.from) / (args.points - 1) as f64;
        for i in 0..args.points {
            values.push(args.from + h * i as f64);
        }
    }
    if args.param == SweepParam::N {
        for v in &mut values {
            *v = v.round();
        }
        values.dedup();
        if values.iter().any(|&v| v < 1.0) {
            return Err(CliError::Usage("N grid values must be at least 1".into()));
        }
    }
    for w in values.windows(2) {
        if !(w[0] < w[1]) {
            return Err(CliError::Usage(
                "grid values must be strictly increasing".into(),
            ));
        }
    }
    Ok(values)
}

fn sweep_instance(
    args: &SweepArgs,
    grid_value: f64,
) -> Result<(SmoothProblemSpec, StepSchedule), CliError> {
    let need = |opt: Option<f64>, name: &str| {
        opt.ok_or_else(|| CliError::Usage(format!("--{name} is required for this sweep")))
    };
    match args.param {
        SweepParam::Step => {
            if args.t_const.is_some() || args.steps.is_some() {
                return Err(CliError::Usage(
                    "step sweeps take the step from the grid; drop --t-const/--steps".into(),
                ));
            }
            let n = args
                .n_steps
                .ok_or_else(|| CliError::Usage("--N is required for step sweeps".into()))?;
            let delta = need(args.delta, "delta")?;
            Ok((
                SmoothProblemSpec::new(args.lipschitz, delta)?,
                StepSchedule::constant(grid_value, n)?,
            ))
        }
        SweepParam::N => {
            let t = need(args.t_const, "t-const")?;
            let delta = need(args.delta, "delta")?;
            Ok((
                SmoothProblemSpec::new(args.lipschitz, delta)?,
                StepSchedule::constant(t, grid_value as usize)?,
            ))
        }
        SweepParam::Delta => {
            if args.delta.is_some() {
                return Err(CliError::Usage(
                    "delta sweeps take delta from the grid; drop --delta".into(),
                ));
            }
            let schedule = if let Some(steps) = &args.steps {
                StepSchedule::new(steps.clone())?
            } else {
                let t = need(args.t_const, "t-const")?;
                let n = args
                    .n_steps
                    .ok_or_else(|| CliError::Usage("--N is required with --t-const".into()))?;
                StepSchedule::constant(t, n)?
            };
            Ok((
                SmoothProblemSpec::new(args.lipschitz, grid_value)?,
                schedule,
            ))
        }
    }
}

pub fn cmd_check_interp(args: &CheckInterpArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.input)?;
    let json: TripleSetJson = serde_json::from_str(&text)?;
    let set: TripleSet = json.try_into()?;
    let check = check_interpolation(&set, args.tol);
    if check.ok {
        println!(
            "ok: {} triples, all {} ordered pairs satisfy the interpolation conditions",
            set.len(),
            set.len() * (set.len() - 1)
        );
        Ok(())
    } else {
        println!("{} violated pair(s), worst first:", check.violations.len());
        for v in check.violations.iter().take(10) {
            println!("  pair ({}, {}): residual {:e}", v.i, v.j, v.residual);
        }
        Err(CliError::Failed(format!(
            "interpolation check failed: worst pair ({}, {}) with residual {:e}",
            check.violations[0].i, check.violations[0].j, check.violations[0].residual
        )))
    }
}
