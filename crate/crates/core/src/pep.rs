//! Assembly of the finite worst-case program in Gram-matrix form.
//!
//! After eliminating the iterates through `x_{k+1} = x_k - t_k g_k`, every
//! constraint of the worst-case problem is an affine function of the values
//! `f_1..f_{N+1}`, the lower bound `f_star`, the objective variable `ell`,
//! and the Gram matrix `G` of the gradients. [`assemble_pep`] produces the
//! full program in a frozen constraint order; [`pair_value_direct`] is the
//! independent oracle that evaluates the same quantity straight from vectors
//! without touching the Gram encoding, and is what the encoding is tested
//! against.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::linalg::Matrix;
use crate::problem::{SmoothProblemSpec, StepSchedule};

/// Which family a constraint belongs to. Indices are 1-based iterate labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// Interpolation between iterates `i` and `j` (ordered pair).
    Pair { i: usize, j: usize },
    /// Stationarity-aware lower bound `f_k - G_kk/(2L) - f_star >= 0`.
    Stationarity { k: usize },
    /// Initial gap `f_star - f_1 + delta >= 0`.
    Gap,
    /// Objective link `G_kk - ell >= 0`.
    Link { k: usize },
}

/// One affine-in-`(f, f_star, ell, G)` inequality
///
/// `f_coeff . f + fstar_coeff * f_star + ell_coeff * ell + const_coeff
///  + tr(gram_coeff * G) >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticConstraint {
    pub kind: ConstraintKind,
    /// Symmetric coefficient of the Gram form, `(N+1) x (N+1)`.
    pub gram_coeff: Matrix,
    pub f_coeff: Vec<f64>,
    pub fstar_coeff: f64,
    pub ell_coeff: f64,
    pub const_coeff: f64,
}

impl QuadraticConstraint {
    /// Left-hand side of the inequality at a concrete point.
    pub fn value(&self, f: &[f64], f_star: f64, ell: f64, gram: &Matrix) -> f64 {
        let mut v = self.const_coeff + self.fstar_coeff * f_star + self.ell_coeff * ell;
        for (c, fv) in self.f_coeff.iter().zip(f) {
            v += c * fv;
        }
        v + self.gram_coeff.frob_inner(gram)
    }
}

/// The assembled program: maximize `ell` subject to all constraints and
/// `G` positive semidefinite.
///
/// Constraint order is frozen (pairs lexicographic, then stationarity by
/// `k`, then the gap, then links by `k`); dual multipliers are reported in
/// this order everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct PepProgram {
    pub spec: SmoothProblemSpec,
    pub schedule: StepSchedule,
    pub constraints: Vec<QuadraticConstraint>,
}

impl PepProgram {
    /// Side length of the Gram matrix, `N + 1`.
    #[inline]
    pub fn gram_dim(&self) -> usize {
        self.schedule.len() + 1
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.schedule.len()
    }

    /// `(N+1)N` pairs + `N+1` stationarity + 1 gap + `N+1` links.
    pub fn expected_constraint_count(n_steps: usize) -> usize {
        let n1 = n_steps + 1;
        n1 * n_steps + n1 + 1 + n1
    }

    /// Constraint values (slacks) at a candidate solution, frozen order.
    pub fn slacks(&self, f: &[f64], ell: f64, gram: &Matrix) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|c| c.value(f, self.spec.f_star, ell, gram))
            .collect()
    }
}

/// Coefficient vector of `x_i - x_j` in the gradient basis:
/// `x_i - x_j = sum_k d_k g_k` after eliminating the iterates.
fn displacement_coeffs(i: usize, j: usize, steps: &[f64]) -> Vec<f64> {
    let n1 = steps.len() + 1;
    let mut d = vec![0.0; n1];
    if i > j {
        for k in j..i {
            d[k - 1] -= steps[k - 1];
        }
    } else {
        for k in i..j {
            d[k - 1] += steps[k - 1];
        }
    }
    d
}

/// Interpolation constraint between iterates `i` and `j` (1-based, distinct)
/// with the iterates eliminated.
///
/// The Gram coefficient is accumulated from the rank-one pieces of the
/// expanded expression and symmetrized; correctness is established by the
/// random-vector oracle ([`pair_value_direct`]), not by hand algebra.
pub fn build_pair_constraint(
    i: usize,
    j: usize,
    schedule: &StepSchedule,
    lipschitz: f64,
) -> Result<QuadraticConstraint, CoreError> {
    let n1 = schedule.len() + 1;
    for idx in [i, j] {
        if idx < 1 || idx > n1 {
            return Err(CoreError::IndexOutOfRange { index: idx, len: n1 });
        }
    }
    if i == j {
        return Err(CoreError::InvalidParameter(
            "pair constraint requires distinct iterate indices".into(),
        ));
    }
    let l = lipschitz;
    let d = displacement_coeffs(i, j, schedule.steps());
    // u = g_i - g_j, v = (x_i - x_j) - (g_i - g_j)/L, all in gradient coords
    let mut u = vec![0.0; n1];
    u[i - 1] += 1.0;
    u[j - 1] -= 1.0;
    let v: Vec<f64> = d.iter().zip(&u).map(|(dk, uk)| dk - uk / l).collect();
    let mut ej = vec![0.0; n1];
    ej[j - 1] = 1.0;

    // residual = f_i - f_j - <g_j, x_i - x_j> - ||u||^2/(2L) + (L/4) ||v||^2
    let mut a = Matrix::zeros(n1, n1);
    a.add_outer(-1.0, &ej, &d);
    a.add_outer(-1.0 / (2.0 * l), &u, &u);
    a.add_outer(0.25 * l, &v, &v);
    let a = a.symmetrized();

    let mut f_coeff = vec![0.0; n1];
    f_coeff[i - 1] += 1.0;
    f_coeff[j - 1] -= 1.0;
    Ok(QuadraticConstraint {
        kind: ConstraintKind::Pair { i, j },
        gram_coeff: a,
        f_coeff,
        fstar_coeff: 0.0,
        ell_coeff: 0.0,
        const_coeff: 0.0,
    })
}

fn stationarity_constraint(k: usize, n1: usize, lipschitz: f64) -> QuadraticConstraint {
    let mut a = Matrix::zeros(n1, n1);
    a[(k - 1, k - 1)] = -1.0 / (2.0 * lipschitz);
    let mut f_coeff = vec![0.0; n1];
    f_coeff[k - 1] = 1.0;
    QuadraticConstraint {
        kind: ConstraintKind::Stationarity { k },
        gram_coeff: a,
        f_coeff,
        fstar_coeff: -1.0,
        ell_coeff: 0.0,
        const_coeff: 0.0,
    }
}

fn gap_constraint(n1: usize, delta: f64) -> QuadraticConstraint {
    let mut f_coeff = vec![0.0; n1];
    f_coeff[0] = -1.0;
    QuadraticConstraint {
        kind: ConstraintKind::Gap,
        gram_coeff: Matrix::zeros(n1, n1),
        f_coeff,
        fstar_coeff: 1.0,
        ell_coeff: 0.0,
        const_coeff: delta,
    }
}

fn link_constraint(k: usize, n1: usize) -> QuadraticConstraint {
    let mut a = Matrix::zeros(n1, n1);
    a[(k - 1, k - 1)] = 1.0;
    QuadraticConstraint {
        kind: ConstraintKind::Link { k },
        gram_coeff: a,
        f_coeff: vec![0.0; n1],
        fstar_coeff: 0.0,
        ell_coeff: -1.0,
        const_coeff: 0.0,
    }
}

/// Builds the complete program for one instance.
pub fn assemble_pep(spec: &SmoothProblemSpec, schedule: &StepSchedule) -> PepProgram {
    let n1 = schedule.len() + 1;
    let mut constraints =
        Vec::with_capacity(PepProgram::expected_constraint_count(schedule.len()));
    for i in 1..=n1 {
        for j in 1..=n1 {
            if i != j {
                constraints.push(
                    build_pair_constraint(i, j, schedule, spec.lipschitz)
                        .expect("indices in range"),
                );
            }
        }
    }
    for k in 1..=n1 {
        constraints.push(stationarity_constraint(k, n1, spec.lipschitz));
    }
    constraints.push(gap_constraint(n1, spec.delta));
    for k in 1..=n1 {
        constraints.push(link_constraint(k, n1));
    }
    PepProgram {
        spec: *spec,
        schedule: schedule.clone(),
        constraints,
    }
}

/// Direct evaluation of the pair expression on explicit gradient vectors,
/// independent of the Gram encoding.
///
/// Rebuilds the iterates from `x_1 = 0` by the update rule and evaluates the
/// interpolation residual on vectors. `grads` holds `N+1` gradient vectors of
/// equal dimension; `f_vals` the `N+1` function values.
pub fn pair_value_direct(
    i: usize,
    j: usize,
    schedule: &StepSchedule,
    lipschitz: f64,
    grads: &[Vec<f64>],
    f_vals: &[f64],
) -> Result<f64, CoreError> {
    let n1 = schedule.len() + 1;
    if grads.len() != n1 || f_vals.len() != n1 {
        return Err(CoreError::DimensionMismatch {
            left: grads.len(),
            right: n1,
        });
    }
    for idx in [i, j] {
        if idx < 1 || idx > n1 {
            return Err(CoreError::IndexOutOfRange { index: idx, len: n1 });
        }
    }
    let dim = grads[0].len();
    let mut xs = vec![vec![0.0; dim]];
    for (k, &t) in schedule.steps().iter().enumerate() {
        let prev = xs.last().unwrap();
        let next: Vec<f64> = prev
            .iter()
            .zip(&grads[k])
            .map(|(x, g)| x - t * g)
            .collect();
        xs.push(next);
    }
    let a = crate::problem::IterateTriple::new(xs[i - 1].clone(), grads[i - 1].clone(), f_vals[i - 1])?;
    let b = crate::problem::IterateTriple::new(xs[j - 1].clone(), grads[j - 1].clone(), f_vals[j - 1])?;
    crate::interp::interp_residual(&a, &b, lipschitz)
}

/// Gram matrix of a family of equal-dimension vectors.
pub fn gram_of(vectors: &[Vec<f64>]) -> Matrix {
    let n = vectors.len();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
        }
    }
    g
}
