//! Closed-form worst-case bounds on `min_k ||grad f(x_k)||` for the
//! fixed-step gradient method, per-step weights, and the weight-optimal
//! step length.
//!
//! Each bound is valid only on its own step-length regime and returns
//! `CoreError::Regime` outside it; [`bound_report`] evaluates all of them at
//! once, leaving out-of-regime entries absent so parameter sweeps never
//! abort mid-grid.

use crate::error::CoreError;
use crate::num::{cube, sqrt};
use crate::problem::{classify_regime, RegimeClass, SmoothProblemSpec, StepSchedule, SQRT_3, TOL_EQ};

/// Denominator contribution of one step to the main bound:
/// `min(-L^2 t^3 + 4t, -L t^2 + 4t)`.
///
/// The two arguments coincide at `t = 1/L`; below it the quadratic branch is
/// smaller, above it the cubic one.
pub fn per_step_weight(t: f64, lipschitz: f64) -> f64 {
    let cubic = -lipschitz * lipschitz * cube(t) + 4.0 * t;
    let quad = -lipschitz * t * t + 4.0 * t;
    cubic.min(quad)
}

fn weight_sum(schedule: &StepSchedule, lipschitz: f64) -> f64 {
    schedule
        .steps()
        .iter()
        .map(|&t| per_step_weight(t, lipschitz))
        .sum()
}

fn require_regime(
    schedule: &StepSchedule,
    lipschitz: f64,
    limit: f64,
    closed: bool,
    interval: &'static str,
) -> Result<(), CoreError> {
    for &t in schedule.steps() {
        let scaled = t * lipschitz;
        let outside = if closed { scaled > limit } else { scaled >= limit };
        if outside {
            return Err(CoreError::Regime {
                interval,
                step: t,
                lipschitz,
            });
        }
    }
    Ok(())
}

/// The main worst-case bound `sqrt(4 delta / (sum_k w_k + 2/L))`, proven for
/// every step in `(0, sqrt(3)/L)` and attained exactly when all steps lie in
/// `(0, 1/L]`.
pub fn bound_main(spec: &SmoothProblemSpec, schedule: &StepSchedule) -> Result<f64, CoreError> {
    require_regime(schedule, spec.lipschitz, SQRT_3, false, "(0, sqrt(3)/L)")?;
    let denom = weight_sum(schedule, spec.lipschitz) + 2.0 / spec.lipschitz;
    Ok(sqrt(4.0 * spec.delta / denom))
}

/// The classical rate `sqrt(delta / (sum_k t_k (1 - L t_k / 2) + 1/(2L)))`,
/// valid for steps in `(0, 2/L)`.
pub fn bound_nesterov(spec: &SmoothProblemSpec, schedule: &StepSchedule) -> Result<f64, CoreError> {
    require_regime(schedule, spec.lipschitz, 2.0, false, "(0, 2/L)")?;
    let l = spec.lipschitz;
    let denom: f64 = schedule
        .steps()
        .iter()
        .map(|&t| t * (1.0 - 0.5 * l * t))
        .sum::<f64>()
        + 1.0 / (2.0 * l);
    Ok(sqrt(spec.delta / denom))
}

/// The short-step rate `sqrt(4 delta / sum_k t_k (4 - L t_k))`, valid when
/// every step is at most `1/L`.
pub fn bound_drori(spec: &SmoothProblemSpec, schedule: &StepSchedule) -> Result<f64, CoreError> {
    require_regime(schedule, spec.lipschitz, 1.0, true, "(0, 1/L]")?;
    let l = spec.lipschitz;
    let denom: f64 = schedule.steps().iter().map(|&t| t * (4.0 - l * t)).sum();
    Ok(sqrt(4.0 * spec.delta / denom))
}

/// The claimed unit-step rate `sqrt(4 L delta / (3 N))`. Defined for any `N`;
/// it describes the constant schedule `t_k = 1/L`.
pub fn bound_taylor(spec: &SmoothProblemSpec, n: usize) -> Result<f64, CoreError> {
    if n == 0 {
        return Err(CoreError::InvalidParameter(
            "iteration count must be at least 1".into(),
        ));
    }
    Ok(sqrt(4.0 * spec.lipschitz * spec.delta / (3.0 * n as f64)))
}

/// A bound value that is conjectured rather than proven.
///
/// The newtype is deliberate: downstream report code has to unwrap it
/// explicitly, so a conjectured number cannot silently masquerade as a
/// proven one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjectured(pub f64);

impl Conjectured {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// The conjectured extension of the main bound to `(0, 2/L)`:
/// `sqrt(4 delta / sum_k w_k)`, i.e. the same weights without the `2/L` term.
pub fn bound_conjecture(
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
) -> Result<Conjectured, CoreError> {
    require_regime(schedule, spec.lipschitz, 2.0, false, "(0, 2/L)")?;
    let denom = weight_sum(schedule, spec.lipschitz);
    Ok(Conjectured(sqrt(4.0 * spec.delta / denom)))
}

/// Closed form of the main bound for the weight-optimal constant schedule
/// `t_k = 2/(sqrt(3) L)`: `sqrt(6 sqrt(3) L delta / (8N + 3 sqrt(3)))`.
pub fn bound_b3(spec: &SmoothProblemSpec, n: usize) -> Result<f64, CoreError> {
    if n == 0 {
        return Err(CoreError::InvalidParameter(
            "iteration count must be at least 1".into(),
        ));
    }
    let num = 6.0 * SQRT_3 * spec.lipschitz * spec.delta;
    Ok(sqrt(num / (8.0 * n as f64 + 3.0 * SQRT_3)))
}

/// The constant step length maximizing the per-step weight: `2/(sqrt(3) L)`.
pub fn optimal_step(lipschitz: f64) -> f64 {
    2.0 / (SQRT_3 * lipschitz)
}

/// Every bound evaluated on one instance. A field is present exactly when
/// the schedule lies in that bound's validity regime.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub regime: RegimeClass,
    pub main: Option<f64>,
    pub nesterov: Option<f64>,
    pub drori: Option<f64>,
    pub taylor: Option<f64>,
    pub conjecture: Option<Conjectured>,
}

/// Evaluates all applicable bounds, silently omitting the inapplicable ones.
///
/// The claimed unit-step rate only describes constant `t_k = 1/L` schedules,
/// so it is present iff every `t_k L` equals 1 within [`TOL_EQ`].
pub fn bound_report(spec: &SmoothProblemSpec, schedule: &StepSchedule) -> BoundReport {
    let unit_step = schedule
        .steps()
        .iter()
        .all(|&t| (t * spec.lipschitz - 1.0).abs() <= TOL_EQ);
    BoundReport {
        regime: classify_regime(schedule, spec.lipschitz),
        main: bound_main(spec, schedule).ok(),
        nesterov: bound_nesterov(spec, schedule).ok(),
        drori: bound_drori(spec, schedule).ok(),
        taylor: if unit_step {
            bound_taylor(spec, schedule.len()).ok()
        } else {
            None
        },
        conjecture: bound_conjecture(spec, schedule).ok(),
    }
}
