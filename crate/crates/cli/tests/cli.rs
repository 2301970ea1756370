//! Binary-level tests: flags, exit codes, output determinism, and the file
//! format round trips.

use std::path::PathBuf;
use std::process::{Command, Output};

use pepgrad::formats::{
    BoundReportJson, CertificateReportJson, PepProgramJson, PepSolveReportJson,
    PiecewiseQuadraticJson, TripleSetJson,
};
use pepgrad_core::tight::PiecewiseQuadratic;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pepgrad"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    p.push(name);
    p
}

#[test]
fn bound_table_prints_all_applicable_bounds() {
    let out = run(&["bound", "--L", "1", "--delta", "2", "--t-const", "1", "--N", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("main        0.755929"));
    assert!(text.contains("nesterov    0.894427"));
    assert!(text.contains("drori       0.816497"));
    assert!(text.contains("taylor      0.816497"));
    assert!(text.contains("[CONJECTURE]"));
}

#[test]
fn bound_out_of_main_regime_reports_conjecture_only() {
    let out = run(&["bound", "--L", "1", "--delta", "1", "--t-const", "1.9", "--N", "1", "--json"]);
    assert!(out.status.success());
    let report: BoundReportJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.main.is_none());
    assert!(report.drori.is_none());
    assert!(report.taylor.is_none());
    let conj = report.conjecture.unwrap();
    assert!(conj.conjecture);
    assert!((conj.value - 2.323_383_451_191_075_4).abs() < 1e-10);
}

#[test]
fn bound_zero_delta_is_all_zeros() {
    let out = run(&["bound", "--L", "1", "--delta", "0", "--t-const", "1", "--N", "1", "--json"]);
    assert!(out.status.success());
    let report: BoundReportJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.main, Some(0.0));
    assert_eq!(report.nesterov, Some(0.0));
    assert_eq!(report.conjecture.unwrap().value, 0.0);
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage: conflicting schedule flags
    let out = run(&[
        "bound", "--L", "1", "--delta", "1", "--t-const", "1", "--N", "2", "--steps", "1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // usage: missing schedule entirely
    let out = run(&["bound", "--L", "1", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // regime: every bound inapplicable
    let out = run(&["bound", "--L", "1", "--delta", "1", "--t-const", "2.0", "--N", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("(0, 2/L)"));
    // regime: certificate outside sqrt(3)
    let out = run(&["certify", "--L", "1", "--delta", "1", "--t-const", "1.8", "--N", "1"]);
    assert_eq!(out.status.code(), Some(3));
    // regime: tight instance beyond 1/L
    let out = run(&["tight", "--L", "1", "--delta", "1", "--t-const", "1.2", "--N", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn pep_solve_reports_closed_form_agreement() {
    let out = run(&["pep-solve", "--L", "1", "--delta", "1", "--t-const", "1", "--N", "3", "--json"]);
    assert!(out.status.success());
    let report: PepSolveReportJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.solution.status, "optimal");
    assert!((report.solution.sqrt_ell - 0.603_022_689_155_527_3).abs() < 1e-5);
    assert!(report.abs_diff.unwrap() <= 1e-5);
    // duals are reported per constraint in frozen order
    assert_eq!(report.solution.duals.len(), 4 * 3 + 4 + 1 + 4);
}

#[test]
fn pep_solve_out_of_regime_reports_without_asserting() {
    let out = run(&["pep-solve", "--L", "1", "--delta", "1", "--t-const", "1.5", "--N", "2", "--json"]);
    assert!(out.status.success());
    let report: PepSolveReportJson = serde_json::from_str(&stdout(&out)).unwrap();
    // exactness is not proven here; both values reported, diff carried as-is
    assert!(report.closed_form.is_some());
    assert!(report.abs_diff.is_some());
}

#[test]
fn pep_solve_zero_delta() {
    let out = run(&["pep-solve", "--L", "1", "--delta", "0", "--t-const", "1", "--N", "2", "--json"]);
    assert!(out.status.success());
    let report: PepSolveReportJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.solution.ell, 0.0);
    assert_eq!(report.solution.sqrt_ell, 0.0);
}

#[test]
fn pep_solve_dumps_program_json() {
    let path = tmp("program.json");
    let out = run(&[
        "pep-solve", "--L", "1", "--delta", "1", "--t-const", "1", "--N", "1",
        "--dump-program", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let program: PepProgramJson = serde_json::from_str(&text).unwrap();
    assert_eq!(program.n_steps, 1);
    assert_eq!(program.gram_dim, 2);
    assert_eq!(program.objective, "maximize-ell");
    assert_eq!(program.constraints.len(), 7);
    let kinds: Vec<&str> = program.constraints.iter().map(|c| c.kind.as_str()).collect();
    assert_eq!(
        kinds,
        ["pair", "pair", "stationarity", "stationarity", "gap", "link", "link"]
    );
}

#[test]
fn certify_verifies_mixed_regime_schedule() {
    let out = run(&["certify", "--L", "1", "--delta", "1", "--steps", "0.3,1.6,0.9", "--json"]);
    assert!(out.status.success());
    let report: CertificateReportJson = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.verified);
    assert_eq!(report.input.steps, vec![0.3, 1.6, 0.9]);
    assert_eq!(report.certificate.sigma.len(), 4);
}

#[test]
fn certify_unit_steps_certified_bound() {
    let out = run(&["certify", "--L", "1", "--delta", "1", "--t-const", "1", "--N", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("certified_bound      0.485071"));
}

#[test]
fn tight_simulate_reports_exact_attainment() {
    let out = run(&["tight", "--L", "2", "--delta", "4", "--t-const", "0.5", "--N", "3", "--simulate"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("bound     1.70561"));
    assert!(text.contains("attained  1.70561"));
    assert!(text.contains("exact     true"));
}

#[test]
fn tight_instance_file_roundtrips_and_validates() {
    let path = tmp("instance.json");
    let out = run(&[
        "tight", "--L", "1", "--delta", "2", "--t-const", "1", "--N", "4",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: PiecewiseQuadraticJson = serde_json::from_str(&text).unwrap();
    let f: PiecewiseQuadratic = parsed.clone().try_into().unwrap();
    assert_eq!(f.segments().len(), 10);
    // byte-stable re-emission
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), text);
}

#[test]
fn tight_trajectory_csv_has_frozen_layout() {
    let path = tmp("traj.csv");
    let out = run(&[
        "tight", "--L", "1", "--delta", "2", "--t-const", "1", "--N", "4",
        "--simulate", "--trajectory-out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,x,f,g");
    assert_eq!(lines.len(), 6); // header + N+1 iterates
    assert!(lines[1].starts_with("1,3.779644730092272,"));
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_csv_layout_and_argmin() {
    let out = run(&[
        "sweep", "--param", "step", "--from", "0.1", "--to", "1.7", "--points", "17",
        "--L", "1", "--delta", "1", "--N", "3", "--no-sdp",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,bound_main,bound_nesterov,bound_drori,bound_taylor,bound_conjecture,sdp_value,sdp_gap"
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 17);
    // bound_main minimized at the grid point nearest 2/sqrt(3) = 1.1547
    let argmin = rows
        .iter()
        .filter(|r| !r[1].is_empty())
        .min_by(|a, b| {
            let x: f64 = a[1].parse().unwrap();
            let y: f64 = b[1].parse().unwrap();
            x.partial_cmp(&y).unwrap()
        })
        .unwrap();
    let t: f64 = argmin[0].parse().unwrap();
    assert!((t - 1.2).abs() < 1e-9);
    // short steps: drori present; long steps: drori cell empty
    assert!(!rows[0][3].is_empty());
    assert!(rows[16][3].is_empty());
    // --no-sdp leaves solver columns empty
    assert!(rows.iter().all(|r| r[6].is_empty() && r[7].is_empty()));
}

#[test]
fn sweep_with_sdp_matches_main_bound_on_short_steps() {
    let out = run(&[
        "sweep", "--param", "step", "--from", "0.5", "--to", "1.5", "--points", "3",
        "--L", "1", "--delta", "1", "--N", "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let t: f64 = cells[0].parse().unwrap();
        let sdp: f64 = cells[6].parse().unwrap();
        if !cells[1].is_empty() {
            let main: f64 = cells[1].parse().unwrap();
            if t <= 1.0 {
                assert!((sdp - main).abs() <= 1e-5);
            } else {
                assert!(sdp <= main + 1e-5);
            }
        }
    }
}

#[test]
fn sweep_over_n_and_delta() {
    let out = run(&[
        "sweep", "--param", "n", "--from", "1", "--to", "4", "--points", "4",
        "--L", "1", "--delta", "1", "--t-const", "1", "--no-sdp",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("N,"));
    assert_eq!(text.lines().count(), 5);
    // main at N=4 equals sqrt(4/14)
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    let main: f64 = last[1].parse().unwrap();
    assert!((main - (4.0f64 / 14.0).sqrt()).abs() < 1e-12);

    let out = run(&[
        "sweep", "--param", "delta", "--from", "0.5", "--to", "2.0", "--points", "4",
        "--L", "1", "--steps", "0.5,1.0", "--no-sdp",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("delta,"));
}

#[test]
fn sweep_usage_errors() {
    // step sweep with a fixed step is contradictory
    let out = run(&[
        "sweep", "--param", "step", "--from", "0.1", "--to", "1.0", "--points", "3",
        "--L", "1", "--delta", "1", "--N", "2", "--t-const", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // decreasing grid
    let out = run(&[
        "sweep", "--param", "step", "--from", "1.0", "--to", "0.1", "--points", "3",
        "--L", "1", "--delta", "1", "--N", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_outputs_are_deterministic() {
    let args = [
        "sweep", "--param", "step", "--from", "0.3", "--to", "1.2", "--points", "5",
        "--L", "2", "--delta", "1.5", "--N", "2",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn check_interp_roundtrip_with_tight_export() {
    let triples_path = tmp("triples.json");
    let out = run(&[
        "tight", "--L", "1", "--delta", "1", "--t-const", "0.8", "--N", "3",
        "--triples-out", triples_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = run(&["check-interp", "--in", triples_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("ok:"));

    // lower the first value: a binding constraint must now be violated
    let text = std::fs::read_to_string(&triples_path).unwrap();
    let mut corrupted: TripleSetJson = serde_json::from_str(&text).unwrap();
    corrupted.triples[0].f -= 1e-7;
    let bad_path = tmp("triples-bad.json");
    std::fs::write(&bad_path, serde_json::to_string(&corrupted).unwrap()).unwrap();
    let out = run(&["check-interp", "--in", bad_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("worst first"));
    assert!(stdout(&out).contains("pair ("));
}

#[test]
fn check_interp_single_triple_file() {
    let path = tmp("single.json");
    std::fs::write(
        &path,
        r#"{"L": 1.0, "triples": [{"x": [0.5], "g": [0.5], "f": 0.125}]}"#,
    )
    .unwrap();
    let out = run(&["check-interp", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn unreachable_gap_tolerance_exits_as_solver_failure() {
    // a gap demand below machine precision cannot be certified; the solve
    // must report it instead of pretending
    let out = run(&[
        "pep-solve", "--L", "1", "--delta", "1", "--t-const", "1", "--N", "2",
        "--gap-tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("solver error"), "{err}");
}

#[test]
fn gap_tol_env_var_is_honored() {
    let out = bin()
        .args(["pep-solve", "--L", "1", "--delta", "1", "--t-const", "1", "--N", "1", "--json"])
        .env("PEPGRAD_GAP_TOL", "1e-9")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: PepSolveReportJson =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report.solution.gap <= 1e-9);
}

#[test]
fn json_outputs_reparse_to_identical_documents() {
    for args in [
        vec!["bound", "--L", "1", "--delta", "2", "--t-const", "1", "--N", "4", "--json"],
        vec!["certify", "--L", "1", "--delta", "1", "--t-const", "1", "--N", "2", "--json"],
        vec!["pep-solve", "--L", "1", "--delta", "1", "--t-const", "0.5", "--N", "2", "--json"],
    ] {
        let a = run(&args);
        assert!(a.status.success());
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
    }
}
