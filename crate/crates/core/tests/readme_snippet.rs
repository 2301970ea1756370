// Compile-check of the README library example.
use pepgrad_core::bounds::bound_main;
use pepgrad_core::sdp::{solve_instance, SolveOptions};
use pepgrad_core::tight::attainment_check;
use pepgrad_core::{SmoothProblemSpec, StepSchedule};

#[test]
fn readme_example() -> Result<(), pepgrad_core::CoreError> {
    let spec = SmoothProblemSpec::new(1.0, 2.0)?;
    let schedule = StepSchedule::constant(1.0, 4)?;

    let bound = bound_main(&spec, &schedule)?;
    let sdp = solve_instance(&spec, &schedule, &SolveOptions::default())?;
    assert!((sdp.sqrt_ell() - bound).abs() < 1e-5);
    let att = attainment_check(&spec, &schedule, 1e-9)?;
    assert!(att.exact);
    Ok(())
}
