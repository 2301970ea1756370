//! The univariate worst-case instance: a piecewise quadratic on which the
//! gradient method with short steps attains the main bound with equality at
//! every iterate.
//!
//! The function alternates convex and concave parabolic arcs of curvature
//! `+-L` so that the gradient equals the bound value `U` at every iterate
//! while the function value drains the initial gap exactly; a final
//! half-step anchor at `t = 1/L` closes the construction down to the global
//! minimum `f = 0` at `x = 0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bounds::bound_main;
use crate::error::CoreError;
use crate::interp::norm;
use crate::problem::{IterateTriple, SmoothProblemSpec, StepSchedule, TOL_EQ};

/// One parabolic piece `p x^2 + q x + r` on `[lo, hi]`; `lo = -inf` and
/// `hi = +inf` mark the unbounded end pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl Segment {
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        (self.p * x + self.q) * x + self.r
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        2.0 * self.p * x + self.q
    }
}

/// A continuously differentiable piecewise quadratic covering all of `R`,
/// with every curvature bounded by the stored Lipschitz constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseQuadratic {
    lipschitz: f64,
    segments: Vec<Segment>,
}

impl PiecewiseQuadratic {
    /// Validates coverage (first `lo = -inf`, last `hi = +inf`, abutting
    /// interior breakpoints), C0/C1 matching at breakpoints within
    /// [`TOL_EQ`], and `|2p| <= L`.
    pub fn new(lipschitz: f64, segments: Vec<Segment>) -> Result<Self, CoreError> {
        if !(lipschitz > 0.0) || !lipschitz.is_finite() {
            return Err(CoreError::InvalidParameter(alloc::format!(
                "Lipschitz constant must be positive and finite, got {lipschitz}"
            )));
        }
        if segments.is_empty() {
            return Err(CoreError::InvalidParameter("no segments".into()));
        }
        if segments[0].lo != f64::NEG_INFINITY {
            return Err(CoreError::InvalidParameter(
                "first segment must extend to -inf".into(),
            ));
        }
        if segments[segments.len() - 1].hi != f64::INFINITY {
            return Err(CoreError::InvalidParameter(
                "last segment must extend to +inf".into(),
            ));
        }
        for seg in &segments {
            if !(seg.lo < seg.hi) {
                return Err(CoreError::InvalidParameter(alloc::format!(
                    "segment bounds out of order: [{}, {}]",
                    seg.lo,
                    seg.hi
                )));
            }
            if 2.0 * seg.p.abs() > lipschitz * (1.0 + 1e-12) {
                return Err(CoreError::InvalidParameter(alloc::format!(
                    "segment curvature {} exceeds the smoothness bound",
                    2.0 * seg.p
                )));
            }
        }
        for w in segments.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.hi != b.lo {
                return Err(CoreError::InvalidParameter(alloc::format!(
                    "segments do not abut: {} vs {}",
                    a.hi,
                    b.lo
                )));
            }
            let x = a.hi;
            let scale = a.value(x).abs().max(1.0);
            if (a.value(x) - b.value(x)).abs() > TOL_EQ * scale
                || (a.derivative(x) - b.derivative(x)).abs() > TOL_EQ * scale
            {
                return Err(CoreError::InvalidParameter(alloc::format!(
                    "function is not C1 at breakpoint {x}"
                )));
            }
        }
        Ok(Self {
            lipschitz,
            segments,
        })
    }

    #[inline]
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    #[inline]
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Value and derivative at `x`. Ownership at shared breakpoints is
    /// half-open `[lo, hi)` with the last segment closed; C1 continuity
    /// makes the choice unobservable in the outputs.
    pub fn evaluate(&self, x: f64) -> (f64, f64) {
        let idx = self.segments.partition_point(|s| s.hi <= x);
        let seg = &self.segments[idx.min(self.segments.len() - 1)];
        (seg.value(x), seg.derivative(x))
    }
}

/// The assembled worst-case instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TightInstance {
    pub f: PiecewiseQuadratic,
    /// The bound value; also the gradient at every iterate.
    pub u: f64,
    /// Breakpoint anchors `l_1..l_{N+2}`, strictly decreasing to 0.
    pub anchors: Vec<f64>,
    /// Function values `f_1..f_{N+1}` along the trajectory.
    pub f_values: Vec<f64>,
    /// Starting point; equals the first anchor.
    pub x1: f64,
    /// The schedule with the internal `t_{N+1} = 1/L` anchor step appended.
    pub t_aug: StepSchedule,
}

/// Builds the instance. Requires every step in `(0, 1/L]` (exactness is
/// only established there; longer steps are refused rather than
/// extrapolated) and a positive initial gap.
pub fn build_tight_instance(
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
) -> Result<TightInstance, CoreError> {
    let l = spec.lipschitz;
    for &t in schedule.steps() {
        if t * l > 1.0 {
            return Err(CoreError::Regime {
                interval: "(0, 1/L]",
                step: t,
                lipschitz: l,
            });
        }
    }
    if !(spec.delta > 0.0) {
        return Err(CoreError::InvalidParameter(
            "tight instance requires a positive initial gap".into(),
        ));
    }
    let u = bound_main(spec, schedule).expect("short steps are inside the proven regime");
    let n = schedule.len();
    let mut t_aug = schedule.steps().to_vec();
    t_aug.push(1.0 / l);

    // anchors l_i = U * sum_{k>=i} t_k, plus the terminal 0
    let mut anchors = vec![0.0; n + 2];
    let mut acc = 0.0;
    for i in (0..=n).rev() {
        acc += t_aug[i];
        anchors[i] = u * acc;
    }
    // f_i = delta - (U^2/4) sum_{k<i} (-L t_k^2 + 4 t_k)
    let mut f_values = Vec::with_capacity(n + 1);
    let mut drained = 0.0;
    f_values.push(spec.delta);
    for &t in schedule.steps() {
        drained += -l * t * t + 4.0 * t;
        f_values.push(spec.delta - 0.25 * u * u * drained);
    }

    // segments in ascending order: the convex bottom piece, then around each
    // anchor l_{i+1} a convex arc up to it and a concave arc beyond it, then
    // the convex top piece through (l_1, f_1)
    let arc = |center: f64, value: f64, curvature: f64| -> (f64, f64, f64) {
        // curvature/2 (x - center)^2 + U (x - center) + value, expanded
        let p = 0.5 * curvature;
        let q = -curvature * center + u;
        let r = p * center * center - u * center + value;
        (p, q, r)
    };
    let mut segments = Vec::with_capacity(2 * n + 2);
    segments.push(Segment {
        lo: f64::NEG_INFINITY,
        hi: 0.5 * anchors[n],
        p: 0.5 * l,
        q: 0.0,
        r: 0.0,
    });
    for i in (1..=n).rev() {
        let c = anchors[i]; // l_{i+1} in 1-based labels
        let (p, q, r) = arc(c, f_values[i], l);
        segments.push(Segment {
            lo: 0.5 * (anchors[i] + anchors[i + 1]),
            hi: c,
            p,
            q,
            r,
        });
        let (p, q, r) = arc(c, f_values[i], -l);
        segments.push(Segment {
            lo: c,
            hi: 0.5 * (anchors[i - 1] + anchors[i]),
            p,
            q,
            r,
        });
    }
    let (p, q, r) = arc(anchors[0], f_values[0], l);
    segments.push(Segment {
        lo: 0.5 * (anchors[0] + anchors[1]),
        hi: f64::INFINITY,
        p,
        q,
        r,
    });

    let f = PiecewiseQuadratic::new(l, segments)?;
    Ok(TightInstance {
        f,
        u,
        anchors,
        f_values,
        x1: u * (t_aug.iter().sum::<f64>()),
        t_aug: StepSchedule::new(t_aug).expect("positive steps"),
    })
}

/// One gradient-descent run against a value-and-gradient oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct GdRun {
    /// `N + 1` observed triples `x_1..x_{N+1}`.
    pub trajectory: Vec<IterateTriple>,
    pub min_grad_norm: f64,
    /// 1-based iterate index attaining the minimum (lowest on ties).
    pub argmin_index: usize,
}

/// Runs `x_{k+1} = x_k - t_k g_k` from `x1`, querying the oracle at each of
/// the `N + 1` iterates. Oracle failures propagate.
pub fn run_gd<F>(mut oracle: F, x1: &[f64], schedule: &StepSchedule) -> Result<GdRun, CoreError>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>), CoreError>,
{
    let mut x = x1.to_vec();
    let mut trajectory = Vec::with_capacity(schedule.len() + 1);
    let mut min_grad_norm = f64::INFINITY;
    let mut argmin_index = 1usize;
    for k in 0..=schedule.len() {
        let (value, grad) = oracle(&x)?;
        if grad.len() != x.len() {
            return Err(CoreError::DimensionMismatch {
                left: grad.len(),
                right: x.len(),
            });
        }
        let g_norm = norm(&grad);
        if g_norm < min_grad_norm {
            min_grad_norm = g_norm;
            argmin_index = k + 1;
        }
        trajectory.push(IterateTriple::new(x.clone(), grad.clone(), value)?);
        if k < schedule.len() {
            let t = schedule.steps()[k];
            for (xi, gi) in x.iter_mut().zip(&grad) {
                *xi -= t * gi;
            }
        }
    }
    Ok(GdRun {
        trajectory,
        min_grad_norm,
        argmin_index,
    })
}

/// Outcome of comparing the bound against what the method actually attains
/// on the built instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttainmentCheck {
    pub bound: f64,
    pub attained: f64,
    pub exact: bool,
}

/// Builds the instance, runs the method from its starting point, and checks
/// `|attained - bound| <= tol * max(1, bound)`.
pub fn attainment_check(
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
    tol: f64,
) -> Result<AttainmentCheck, CoreError> {
    let instance = build_tight_instance(spec, schedule)?;
    let run = run_gd(
        |x| {
            let (v, d) = instance.f.evaluate(x[0]);
            Ok((v, vec![d]))
        },
        &[instance.x1],
        schedule,
    )?;
    let bound = instance.u;
    let attained = run.min_grad_norm;
    Ok(AttainmentCheck {
        bound,
        attained,
        exact: (attained - bound).abs() <= tol * bound.max(1.0),
    })
}

/// The instance's trajectory data as interpolation triples
/// `(x = l_i, g = U, f = f_i)`, ready for the interpolation checker.
pub fn export_triples(instance: &TightInstance) -> crate::interp::TripleSet {
    let triples: Vec<IterateTriple> = instance
        .anchors
        .iter()
        .zip(&instance.f_values)
        .map(|(&x, &f)| IterateTriple::scalar(x, instance.u, f))
        .collect();
    crate::interp::TripleSet::new(instance.f.lipschitz(), triples)
        .expect("instance triples are valid by construction")
}
