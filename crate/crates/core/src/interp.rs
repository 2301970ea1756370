//! Smooth interpolation: decide whether a finite set of
//! (point, gradient, value) triples can be extended to a function with an
//! `L`-Lipschitz gradient, and locate the minimum of the minimal extension.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::num::sqrt;
use crate::problem::{IterateTriple, TOL_EQ};

/// A finite family of triples sharing one ambient dimension, together with
/// the gradient Lipschitz constant they are checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSet {
    pub lipschitz: f64,
    pub triples: Vec<IterateTriple>,
}

impl TripleSet {
    pub fn new(lipschitz: f64, triples: Vec<IterateTriple>) -> Result<Self, CoreError> {
        if !(lipschitz > 0.0) || !lipschitz.is_finite() {
            return Err(CoreError::InvalidParameter(alloc::format!(
                "Lipschitz constant must be positive and finite, got {lipschitz}"
            )));
        }
        if triples.is_empty() {
            return Err(CoreError::InvalidParameter(
                "triple set must be nonempty".into(),
            ));
        }
        let dim = triples[0].dim();
        for t in &triples {
            if t.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    left: dim,
                    right: t.dim(),
                });
            }
        }
        Ok(Self { lipschitz, triples })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.triples[0].dim()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // validated nonempty
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Interpolation residual of the ordered pair `(a, b)`:
///
/// `f_a - f_b - <g_b, x_a - x_b> - ||g_a - g_b||^2 / (2L)
///  + (L/4) ||x_a - x_b - (g_a - g_b)/L||^2`
///
/// Both ordered residuals being nonnegative over all pairs is exactly the
/// condition for an `L`-smooth extension to exist.
pub fn interp_residual(
    a: &IterateTriple,
    b: &IterateTriple,
    lipschitz: f64,
) -> Result<f64, CoreError> {
    if a.dim() != b.dim() {
        return Err(CoreError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let l = lipschitz;
    let mut ip = 0.0; // <g_b, x_a - x_b>
    let mut gg = 0.0; // ||g_a - g_b||^2
    let mut disp = 0.0; // ||x_a - x_b - (g_a - g_b)/L||^2
    for k in 0..a.dim() {
        let dx = a.x[k] - b.x[k];
        let dg = a.g[k] - b.g[k];
        ip += b.g[k] * dx;
        gg += dg * dg;
        let v = dx - dg / l;
        disp += v * v;
    }
    Ok(a.f - b.f - ip - gg / (2.0 * l) + 0.25 * l * disp)
}

/// One violated ordered pair; indices are 1-based to match iterate numbering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub residual: f64,
}

/// Outcome of checking all ordered pairs of a triple set.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationCheck {
    pub ok: bool,
    /// Violations sorted by residual ascending (worst first).
    pub violations: Vec<Violation>,
}

/// Checks every ordered pair `(i, j)`, `i != j`, against the interpolation
/// condition with additive tolerance `tol`.
///
/// The tolerance is additive because binding pairs of worst-case instances
/// have residual exactly zero, where a relative test is meaningless.
pub fn check_interpolation(set: &TripleSet, tol: f64) -> InterpolationCheck {
    let n = set.len();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let r = interp_residual(&set.triples[i], &set.triples[j], set.lipschitz)
                .expect("dimensions validated on construction");
            if r < -tol {
                violations.push(Violation {
                    i: i + 1,
                    j: j + 1,
                    residual: r,
                });
            }
        }
    }
    violations.sort_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap());
    InterpolationCheck {
        ok: violations.is_empty(),
        violations,
    }
}

/// Global minimum of the minimal smooth extension of an interpolable set.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionMinimum {
    pub f_min: f64,
    pub x_min: Vec<f64>,
    /// 1-based index of the triple realizing the minimum (lowest on ties).
    pub witness_index: usize,
}

/// `f_min = min_i (f_i - ||g_i||^2 / 2L)` attained at `x_i - g_i / L` for the
/// minimizing triple. Requires the set to pass [`check_interpolation`] at the
/// default tolerance.
pub fn extension_minimum(set: &TripleSet) -> Result<ExtensionMinimum, CoreError> {
    let check = check_interpolation(set, TOL_EQ);
    if !check.ok {
        let worst = check.violations[0];
        return Err(CoreError::NotInterpolable {
            i: worst.i,
            j: worst.j,
            residual: worst.residual,
        });
    }
    let l = set.lipschitz;
    let mut best = 0usize;
    let mut best_val = f64::INFINITY;
    for (idx, t) in set.triples.iter().enumerate() {
        let val = t.f - dot(&t.g, &t.g) / (2.0 * l);
        if val < best_val {
            best_val = val;
            best = idx;
        }
    }
    let t = &set.triples[best];
    let x_min = t
        .x
        .iter()
        .zip(&t.g)
        .map(|(x, g)| x - g / l)
        .collect::<Vec<_>>();
    Ok(ExtensionMinimum {
        f_min: best_val,
        x_min,
        witness_index: best + 1,
    })
}

/// True iff the observed value after one unit step respects the descent
/// guarantee `f(x - g/L) <= f - ||g||^2 / 2L` (up to [`TOL_EQ`]).
pub fn descent_lemma_check(triple: &IterateTriple, f_at_step: f64, lipschitz: f64) -> bool {
    let g2 = dot(&triple.g, &triple.g);
    f_at_step <= triple.f - g2 / (2.0 * lipschitz) + TOL_EQ
}

/// Euclidean norm helper used by consumers reporting gradient magnitudes.
pub fn norm(v: &[f64]) -> f64 {
    sqrt(dot(v, v))
}
