//! Machine-checked replay of the dual certificate behind the main bound.
//!
//! The certificate is a set of explicit nonnegative multipliers whose
//! weighted combination of program constraints collapses to
//! `ell - U + (nonpositive quadratic form)`, proving `ell <= U` for every
//! feasible point without solving the semidefinite program. The check here
//! runs in coefficient space: all linear coefficients must cancel exactly
//! and the aggregated Gram coefficient must equal the known nonpositive
//! remainder `-sum_k Q_k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bounds::bound_main;
use crate::error::CoreError;
use crate::linalg::{max_eigenvalue, Matrix};
use crate::num::{cube, sqrt};
use crate::pep::{build_pair_constraint, QuadraticConstraint};
use crate::problem::{SmoothProblemSpec, StepSchedule, SQRT_3};

/// Margin below `sqrt(3)` required of every scaled step, guarding the
/// exact-sign multiplier checks against boundary round-off.
const REGIME_GUARD: f64 = 1e-12;

/// Cancellation tolerance for the aggregated linear coefficients.
const LINEAR_TOL: f64 = 1e-12;

/// The dual multipliers proving the main bound for one instance.
///
/// `u` is the squared bound value, `b = u / delta` the multiplier shared by
/// the gap and final stationarity constraints, `alpha[k]` the forward pair
/// multipliers (the backward pairs carry `alpha[k] - b`), and `sigma[k]` the
/// objective-link multipliers which sum to one by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub b: f64,
    pub alpha: Vec<f64>,
    pub sigma: Vec<f64>,
    pub u: f64,
}

/// Builds the multipliers. Requires every step in `(0, sqrt(3)/L)` with a
/// `1e-12` guard and a strictly positive initial gap.
pub fn build_certificate(
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
) -> Result<Certificate, CoreError> {
    let l = spec.lipschitz;
    for &t in schedule.steps() {
        if t * l > SQRT_3 - REGIME_GUARD {
            return Err(CoreError::Regime {
                interval: "(0, sqrt(3)/L)",
                step: t,
                lipschitz: l,
            });
        }
    }
    if !(spec.delta > 0.0) {
        return Err(CoreError::InvalidParameter(
            "certificate construction requires a positive initial gap".into(),
        ));
    }
    let bound = bound_main(spec, schedule).expect("regime checked above");
    let u = bound * bound;
    let b = u / spec.delta;

    let steps = schedule.steps();
    let n = steps.len();
    let alpha: Vec<f64> = steps
        .iter()
        .map(|&t| 0.5 * b * (2.0f64).max(t * l + 1.0))
        .collect();
    let mut sigma = Vec::with_capacity(n + 1);
    for k in 0..n {
        let t = steps[k];
        let prev = if k == 0 { 0.0 } else { steps[k - 1] };
        let quad = -l * t * t + 3.0 * t + prev;
        let cubic = -l * l * cube(t) + 3.0 * t + prev;
        sigma.push(0.25 * b * quad.min(cubic));
    }
    let partial: f64 = sigma.iter().sum();
    sigma.push(1.0 - partial);
    Ok(Certificate { b, alpha, sigma, u })
}

/// All aggregated coefficients of the certificate's weighted sum.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedForm {
    pub gram_coeff: Matrix,
    pub f_coeffs: Vec<f64>,
    pub fstar_coeff: f64,
    pub ell_coeff: f64,
    pub const_coeff: f64,
}

fn accumulate(acc: &mut AggregatedForm, weight: f64, c: &QuadraticConstraint) {
    acc.gram_coeff.scaled_add(weight, &c.gram_coeff);
    for (a, v) in acc.f_coeffs.iter_mut().zip(&c.f_coeff) {
        *a += weight * v;
    }
    acc.fstar_coeff += weight * c.fstar_coeff;
    acc.ell_coeff += weight * c.ell_coeff;
    acc.const_coeff += weight * c.const_coeff;
}

/// Forms the certificate's weighted sum of constraint encodings:
/// `(ell - u) + sum_k sigma_k link_k + b gap + b stationarity_{N+1}
///  + sum_k alpha_k pair(k, k+1) + sum_k (alpha_k - b) pair(k+1, k)`.
///
/// Reuses the program-assembly encodings so that a pass here inherits the
/// independent random-vector validation of those encodings.
pub fn aggregate_identity(
    cert: &Certificate,
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
) -> AggregatedForm {
    let l = spec.lipschitz;
    let n = schedule.len();
    let n1 = n + 1;
    let mut acc = AggregatedForm {
        gram_coeff: Matrix::zeros(n1, n1),
        f_coeffs: vec![0.0; n1],
        fstar_coeff: 0.0,
        ell_coeff: 1.0,            // objective term ell
        const_coeff: -cert.u,      // ... minus the claimed bound
    };
    // links: G_kk - ell >= 0
    for k in 0..n1 {
        acc.gram_coeff[(k, k)] += cert.sigma[k];
        acc.ell_coeff -= cert.sigma[k];
    }
    // gap: f_star - f_1 + delta >= 0
    acc.f_coeffs[0] -= cert.b;
    acc.fstar_coeff += cert.b;
    acc.const_coeff += cert.b * spec.delta;
    // stationarity at the last iterate: f_{N+1} - G/(2L) - f_star >= 0
    acc.f_coeffs[n1 - 1] += cert.b;
    acc.fstar_coeff -= cert.b;
    acc.gram_coeff[(n1 - 1, n1 - 1)] -= cert.b / (2.0 * l);
    // consecutive interpolation pairs in both orders
    for k in 1..=n {
        let fwd = build_pair_constraint(k, k + 1, schedule, l).expect("in range");
        accumulate(&mut acc, cert.alpha[k - 1], &fwd);
        let bwd = build_pair_constraint(k + 1, k, schedule, l).expect("in range");
        accumulate(&mut acc, cert.alpha[k - 1] - cert.b, &bwd);
    }
    acc
}

/// Expected value of the aggregated Gram coefficient: `-sum_k Q_k`, where
/// `Q_k` puts `(b/4)(1/L - t_k)` on `||g_k - g_{k+1}||^2` for `t_k < 1/L`
/// and vanishes otherwise.
pub fn expected_residual_form(
    cert: &Certificate,
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
) -> Matrix {
    let l = spec.lipschitz;
    let n1 = schedule.len() + 1;
    let mut m = Matrix::zeros(n1, n1);
    for (k, &t) in schedule.steps().iter().enumerate() {
        if t < 1.0 / l {
            let c = 0.25 * cert.b * (1.0 / l - t);
            m[(k, k)] -= c;
            m[(k + 1, k + 1)] -= c;
            m[(k, k + 1)] += c;
            m[(k + 1, k)] += c;
        }
    }
    m
}

/// Outcome of verifying one certificate. `verified` is the conjunction of
/// all five checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    pub multipliers_nonneg: bool,
    pub sigma_sums_to_one: bool,
    pub linear_terms_vanish: bool,
    pub quadratic_matches_q: bool,
    pub residual_nsd: bool,
    /// The certified worst-case value `sqrt(u)`.
    pub certified_bound: f64,
}

impl CertificateReport {
    pub fn verified(&self) -> bool {
        self.multipliers_nonneg
            && self.sigma_sums_to_one
            && self.linear_terms_vanish
            && self.quadratic_matches_q
            && self.residual_nsd
    }
}

/// Checks the certificate end to end.
///
/// Multiplier signs are checked exactly (the formulas are nonnegative on the
/// guarded regime, so a negative value means a regime violation, not
/// round-off), linear cancellation against `1e-12`, and the quadratic
/// comparison against `q_tol`.
pub fn verify_certificate(
    cert: &Certificate,
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
    q_tol: f64,
) -> CertificateReport {
    let agg = aggregate_identity(cert, spec, schedule);
    let expected = expected_residual_form(cert, spec, schedule);

    let multipliers_nonneg =
        cert.alpha.iter().all(|&a| a >= 0.0) && cert.sigma.iter().all(|&s| s >= 0.0);
    let sigma_total: f64 = cert.sigma.iter().sum();
    let sigma_sums_to_one = sigma_total == 1.0;
    let linear_max = agg
        .f_coeffs
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(agg.fstar_coeff.abs())
        .max(agg.ell_coeff.abs())
        .max(agg.const_coeff.abs());
    let linear_terms_vanish = linear_max <= LINEAR_TOL;
    let quadratic_matches_q = agg.gram_coeff.max_abs_diff(&expected) <= q_tol;
    let residual_nsd = max_eigenvalue(&agg.gram_coeff) <= q_tol;

    CertificateReport {
        multipliers_nonneg,
        sigma_sums_to_one,
        linear_terms_vanish,
        quadratic_matches_q,
        residual_nsd,
        certified_bound: sqrt(cert.u.max(0.0)),
    }
}
