//! Shared domain types: problem class, step schedules, regime
//! classification, and iterate triples.

use alloc::format;
use alloc::vec::Vec;

use crate::error::CoreError;

/// Default absolute tolerance for equality assertions throughout the crate.
/// Individual operations accept an explicit tolerance where it matters.
pub const TOL_EQ: f64 = 1e-9;

/// `sqrt(3)`, the scale-free upper step limit of the proven bound regime.
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// The function class under analysis: gradients are `lipschitz`-Lipschitz,
/// the starting point satisfies `f(x1) - f_star <= delta`, and `f_star` is a
/// known lower bound on the function (0 unless stated otherwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothProblemSpec {
    pub lipschitz: f64,
    pub delta: f64,
    pub f_star: f64,
}

impl SmoothProblemSpec {
    /// `delta = 0` is allowed and forces every downstream bound to zero.
    pub fn new(lipschitz: f64, delta: f64) -> Result<Self, CoreError> {
        Self::with_f_star(lipschitz, delta, 0.0)
    }

    pub fn with_f_star(lipschitz: f64, delta: f64, f_star: f64) -> Result<Self, CoreError> {
        if !(lipschitz > 0.0) || !lipschitz.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "Lipschitz constant must be positive and finite, got {lipschitz}"
            )));
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "initial gap must be nonnegative and finite, got {delta}"
            )));
        }
        if !f_star.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "lower bound must be finite, got {f_star}"
            )));
        }
        Ok(Self {
            lipschitz,
            delta,
            f_star,
        })
    }
}

/// The fixed step lengths `t_1..t_N` of the gradient method.
///
/// Steps are stored as plain lengths; all regime checks work on the
/// scale-free products `t_k * L`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSchedule {
    steps: Vec<f64>,
}

impl StepSchedule {
    pub fn new(steps: Vec<f64>) -> Result<Self, CoreError> {
        if steps.is_empty() {
            return Err(CoreError::InvalidParameter(
                "schedule must contain at least one step".into(),
            ));
        }
        for &t in &steps {
            if !(t > 0.0) || !t.is_finite() {
                return Err(CoreError::InvalidParameter(format!(
                    "step lengths must be positive and finite, got {t}"
                )));
            }
        }
        Ok(Self { steps })
    }

    /// Constant schedule `t_k = t` for `n` iterations.
    pub fn constant(t: f64, n: usize) -> Result<Self, CoreError> {
        if n == 0 {
            return Err(CoreError::InvalidParameter(
                "iteration count must be at least 1".into(),
            ));
        }
        Self::new(alloc::vec![t; n])
    }

    #[inline]
    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    /// Number of gradient steps `N`.
    #[inline]
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // validated nonempty on construction
    }

    /// Largest scale-free step `max_k t_k * L`.
    pub fn max_scaled(&self, lipschitz: f64) -> f64 {
        let mut m = 0.0f64;
        for &t in &self.steps {
            m = m.max(t * lipschitz);
        }
        m
    }

    /// Same schedule expressed in units of `1/L`, i.e. `t_k * L`.
    pub fn scaled(&self, lipschitz: f64) -> StepSchedule {
        StepSchedule {
            steps: self.steps.iter().map(|t| t * lipschitz).collect(),
        }
    }
}

/// Nested validity regimes for the step schedule, tightest first.
///
/// `UnitOrBelow` is the closed interval `(0, 1/L]` on which the main bound is
/// attained exactly; `MainTheorem` is `(0, sqrt(3)/L)` where it is proven;
/// `Conjecture` is `(0, 2/L)` where it is only conjectured; anything with a
/// step at or past `2/L` is `Outside`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeClass {
    UnitOrBelow,
    MainTheorem,
    Conjecture,
    Outside,
}

impl RegimeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeClass::UnitOrBelow => "unit-or-below",
            RegimeClass::MainTheorem => "main-theorem",
            RegimeClass::Conjecture => "conjecture",
            RegimeClass::Outside => "outside",
        }
    }
}

/// Tightest regime containing every step of the schedule.
///
/// Boundaries: `t = 1/L` still counts as `UnitOrBelow`; `t = sqrt(3)/L` and
/// `t = 2/L` fall outside their respective open intervals.
pub fn classify_regime(schedule: &StepSchedule, lipschitz: f64) -> RegimeClass {
    debug_assert!(lipschitz > 0.0);
    let m = schedule.max_scaled(lipschitz);
    if m <= 1.0 {
        RegimeClass::UnitOrBelow
    } else if m < SQRT_3 {
        RegimeClass::MainTheorem
    } else if m < 2.0 {
        RegimeClass::Conjecture
    } else {
        RegimeClass::Outside
    }
}

/// One observed point of a function: location, gradient, and value.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateTriple {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub f: f64,
}

impl IterateTriple {
    pub fn new(x: Vec<f64>, g: Vec<f64>, f: f64) -> Result<Self, CoreError> {
        if x.is_empty() {
            return Err(CoreError::InvalidParameter(
                "iterate dimension must be at least 1".into(),
            ));
        }
        if x.len() != g.len() {
            return Err(CoreError::DimensionMismatch {
                left: x.len(),
                right: g.len(),
            });
        }
        Ok(Self { x, g, f })
    }

    /// Univariate convenience constructor.
    pub fn scalar(x: f64, g: f64, f: f64) -> Self {
        Self {
            x: alloc::vec![x],
            g: alloc::vec![g],
            f,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.x.len()
    }
}
