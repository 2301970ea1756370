//! Dense primal-dual interior-point solver for the assembled worst-case
//! program: one PSD block (the Gram matrix), a nonnegative slack per
//! inequality, and free scalars (`f`, `ell`) handled through the KKT system.
//!
//! The method is Mehrotra predictor-corrector with Nesterov-Todd scaling and
//! fraction-to-boundary 0.98. Instances are solved at the normalized scale
//! `L = 1`, `delta = 1` (the program is homogeneous in `(delta, f - f_star,
//! G, ell)` and covariant in `L`), then unscaled analytically. The returned
//! status is decided by replaying the candidate through the original
//! program's constraint evaluators, never by trusting solver internals.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::linalg::{
    cholesky, cholesky_solve, jacobi_svd, lower_tri_inverse, min_eigenvalue, smat, svec,
    svec_indices, svec_len, sym_eigh, Matrix,
};
use crate::num::sqrt;
use crate::pep::{assemble_pep, ConstraintKind, PepProgram};
use crate::problem::{SmoothProblemSpec, StepSchedule, TOL_EQ};

/// Largest supported Gram dimension (desk scale).
pub const MAX_GRAM_DIM: usize = 64;

/// Solver options; defaults follow the artifact-wide numeric policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Accepted primal-dual objective difference at the original scale.
    pub gap_tol: f64,
    /// Accepted constraint violation at the original scale.
    pub feas_tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-7,
            feas_tol: 1e-7,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    /// Gap, slacks, duals, and PSD-ness all verified within tolerances.
    Optimal,
    /// Iteration budget exhausted before the tolerances were met.
    MaxIter,
    /// A Farkas-type certificate of primal infeasibility was found. Cannot
    /// occur for a validly assembled program (`G = 0`, `f_k = f_star`,
    /// `ell = 0` is always feasible); treat as an assembly bug.
    Infeasible,
    /// The iteration broke down numerically before reaching the tolerances.
    NumericalTrouble,
}

impl SdpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SdpStatus::Optimal => "optimal",
            SdpStatus::MaxIter => "max-iter",
            SdpStatus::Infeasible => "infeasible",
            SdpStatus::NumericalTrouble => "numerical-trouble",
        }
    }
}

/// Primal/dual answer for one program, in the program's frozen
/// constraint order.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Optimal `ell`: the squared worst-case smallest gradient norm.
    pub ell: f64,
    pub gram: Matrix,
    pub f: Vec<f64>,
    /// One nonnegative multiplier per constraint.
    pub duals: Vec<f64>,
    /// `|primal - dual|` objective difference at the original scale.
    pub gap: f64,
    pub iterations: usize,
}

impl SdpSolution {
    /// Worst-case value `sqrt(ell)`.
    pub fn sqrt_ell(&self) -> f64 {
        sqrt(self.ell.max(0.0))
    }

    /// Dual objective `sum_c lambda_c d_c` for the given program.
    pub fn dual_objective(&self, program: &PepProgram) -> f64 {
        dual_objective(program, &self.duals)
    }
}

fn dual_objective(program: &PepProgram, duals: &[f64]) -> f64 {
    program
        .constraints
        .iter()
        .zip(duals)
        .map(|(c, &lam)| lam * (c.const_coeff + c.fstar_coeff * program.spec.f_star))
        .sum()
}

/// Solves the program. Statuses other than `Optimal` are reported in the
/// solution rather than as errors; `Err` is reserved for malformed input.
pub fn solve(program: &PepProgram, options: &SolveOptions) -> Result<SdpSolution, CoreError> {
    let n = program.gram_dim();
    if n > MAX_GRAM_DIM {
        return Err(CoreError::InvalidParameter(alloc::format!(
            "gram dimension {n} exceeds the supported maximum {MAX_GRAM_DIM}"
        )));
    }
    if !(options.gap_tol > 0.0) || !(options.feas_tol > 0.0) || options.max_iter == 0 {
        return Err(CoreError::InvalidParameter(
            "tolerances must be positive and max_iter at least 1".into(),
        ));
    }
    let spec = program.spec;
    let l = spec.lipschitz;
    let delta = spec.delta;

    // Normalized instance: L = 1, delta = 1, f_star = 0, steps t_k * L.
    let norm_spec = SmoothProblemSpec::new(1.0, 1.0).expect("valid");
    let norm_schedule = program.schedule.scaled(l);
    let norm_program = assemble_pep(&norm_spec, &norm_schedule);

    let obj_scale = l * delta; // ell and G scale by L * delta
    let tol_scale = obj_scale.max(delta).max(1.0);
    let loop_tol = (0.25 * options.gap_tol.min(options.feas_tol) / tol_scale).max(5e-13);

    let cone = build_cone_problem(&norm_program);

    // Fast path first; if the replayed solution misses the tolerances,
    // retry on the slower augmented KKT backend, which holds two to three
    // more digits near the optimum.
    let run = cone_solve(&cone, loop_tol, loop_tol, options.max_iter, KktBackend::NormalEquations);
    let first = classify(program, &cone, &run, options);
    if first.status == SdpStatus::Optimal {
        return Ok(first);
    }
    let rerun = cone_solve(&cone, loop_tol, loop_tol, options.max_iter, KktBackend::Augmented);
    let second = classify(program, &cone, &rerun, options);
    if second.status == SdpStatus::Optimal || second.gap < first.gap {
        Ok(second)
    } else {
        Ok(first)
    }
}

/// Unscales a normalized run back to the original instance and decides the
/// status by replaying it through the program's own constraint evaluators.
fn classify(
    program: &PepProgram,
    cone: &ConeProblem,
    run: &ConeRun,
    options: &SolveOptions,
) -> SdpSolution {
    let spec = program.spec;
    let l = spec.lipschitz;
    let delta = spec.delta;
    let n = program.gram_dim();
    let obj_scale = l * delta;

    // ell and G scale by L*delta, f by delta with the f_star offset
    // restored; duals by L except the link family, which is scale-free
    let p_free = n + 1;
    let ell = run.x[n] * obj_scale;
    let f: Vec<f64> = run.x[..n].iter().map(|v| spec.f_star + delta * v).collect();
    let mut gram = smat(&run.x[p_free..], n);
    gram.scale(obj_scale);
    let duals: Vec<f64> = program
        .constraints
        .iter()
        .zip(&run.z[..cone.m_lin])
        .map(|(c, &lam)| match c.kind {
            ConstraintKind::Link { .. } => lam,
            _ => lam * l,
        })
        .collect();

    let slacks = program.slacks(&f, ell, &gram);
    let min_slack = slacks.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let min_dual = duals.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let min_eig = min_eigenvalue(&gram);
    let gap = (ell - dual_objective(program, &duals)).abs();

    let verified = gap <= options.gap_tol
        && min_eig >= -TOL_EQ
        && min_slack >= -options.feas_tol
        && min_dual >= -TOL_EQ;
    let status = if verified {
        SdpStatus::Optimal
    } else {
        match run.exit {
            LoopExit::Converged | LoopExit::Stalled => SdpStatus::NumericalTrouble,
            LoopExit::MaxIter => SdpStatus::MaxIter,
            LoopExit::Breakdown => {
                if is_farkas_certificate(cone, &run.z) {
                    SdpStatus::Infeasible
                } else {
                    SdpStatus::NumericalTrouble
                }
            }
        }
    };

    SdpSolution {
        status,
        ell,
        gram,
        f,
        duals,
        gap,
        iterations: run.iterations,
    }
}

/// Factors a PSD matrix `G` as Gram vectors: returns `rank(G)`-dimensional
/// vectors `v_i` with `<v_i, v_j> = G_ij`. Eigenvalues below `rank_tol` are
/// truncated to zero.
pub fn extract_gram_vectors(gram: &Matrix, rank_tol: f64) -> Result<Vec<Vec<f64>>, CoreError> {
    let n = gram.rows();
    let eig = sym_eigh(gram);
    if eig.values[0] < -rank_tol {
        return Err(CoreError::NotPsd {
            min_eigenvalue: eig.values[0],
        });
    }
    let kept: Vec<usize> = (0..n).filter(|&k| eig.values[k] > rank_tol).collect();
    let mut vectors = vec![Vec::with_capacity(kept.len()); n];
    for &k in kept.iter().rev() {
        // largest eigenvalue first for a deterministic, well-scaled basis
        let root = sqrt(eig.values[k]);
        for (i, v) in vectors.iter_mut().enumerate() {
            v.push(root * eig.vectors[(i, k)]);
        }
    }
    Ok(vectors)
}

// ---------------------------------------------------------------------------
// Internal cone solver: min c'x  s.t.  G x + s = h,  s in R+^m x PSD^n.
// ---------------------------------------------------------------------------

struct ConeProblem {
    c: Vec<f64>,
    /// Dense `(m_lin + svec_len(n_psd)) x q` constraint matrix.
    g: Matrix,
    h: Vec<f64>,
    m_lin: usize,
    n_psd: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LoopExit {
    Converged,
    Stalled,
    MaxIter,
    Breakdown,
}

struct ConeRun {
    x: Vec<f64>,
    z: Vec<f64>,
    exit: LoopExit,
    iterations: usize,
}

/// Maps the normalized program into cone form. Variables are
/// `x = (f_1..f_{N+1}, ell, svec(G))`; the PSD block is tied to the svec
/// variables by identity rows.
fn build_cone_problem(program: &PepProgram) -> ConeProblem {
    let n = program.gram_dim();
    let p_free = n + 1;
    let sc = svec_len(n);
    let q = p_free + sc;
    let m_lin = program.constraints.len();

    let mut g = Matrix::zeros(m_lin + sc, q);
    let mut h = vec![0.0; m_lin + sc];
    for (r, c) in program.constraints.iter().enumerate() {
        for (col, &v) in c.f_coeff.iter().enumerate() {
            g[(r, col)] = -v;
        }
        g[(r, n)] = -c.ell_coeff;
        for (col, v) in svec(&c.gram_coeff).into_iter().enumerate() {
            g[(r, p_free + col)] = -v;
        }
        h[r] = c.const_coeff + c.fstar_coeff * program.spec.f_star;
    }
    for a in 0..sc {
        g[(m_lin + a, p_free + a)] = -1.0;
    }
    let mut c = vec![0.0; q];
    c[n] = -1.0; // maximize ell == minimize -ell
    ConeProblem {
        c,
        g,
        h,
        m_lin,
        n_psd: n,
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

/// `z` proves primal infeasibility when `G' z ~ 0`, `z` in the cone, and
/// `h . z < 0`.
fn is_farkas_certificate(cone: &ConeProblem, z: &[f64]) -> bool {
    let gtz = cone.g.tr_matvec(z);
    let hz: f64 = cone.h.iter().zip(z).map(|(a, b)| a * b).sum();
    inf_norm(&gtz) <= 1e-9 * inf_norm(z).max(1.0) && hz < -1e-9
}

struct NtScaling {
    w_lin: Vec<f64>,
    lambda_lin: Vec<f64>,
    /// PSD scaling factor `R`; `W z = R' Z R`, `W^{-T} s = R^{-1} S R^{-T}`.
    r: Matrix,
    r_inv: Matrix,
    /// Scaled-point eigenvalues (diagonal of the shared scaled variable).
    lambda_psd: Vec<f64>,
}

fn compute_scaling(s: &[f64], z: &[f64], m_lin: usize, n: usize) -> Option<NtScaling> {
    let mut w_lin = vec![0.0; m_lin];
    let mut lambda_lin = vec![0.0; m_lin];
    for i in 0..m_lin {
        if s[i] <= 0.0 || z[i] <= 0.0 {
            return None;
        }
        w_lin[i] = sqrt(s[i] / z[i]);
        lambda_lin[i] = sqrt(s[i] * z[i]);
    }
    let s_mat = smat(&s[m_lin..], n);
    let z_mat = smat(&z[m_lin..], n);
    let l1 = cholesky(&s_mat)?;
    let l2 = cholesky(&z_mat)?;
    let (_, sigma, v) = jacobi_svd(&l2.transpose().matmul(&l1));
    if sigma.iter().any(|&x| !(x > 0.0)) {
        return None;
    }
    // R = L1 V Sigma^{-1/2}; R^{-1} = Sigma^{1/2} V' L1^{-1}
    let l1_inv = lower_tri_inverse(&l1);
    let mut r = l1.matmul(&v);
    let mut r_inv = v.transpose().matmul(&l1_inv);
    for j in 0..n {
        let root = sqrt(sigma[j]);
        for i in 0..n {
            r[(i, j)] /= root;
        }
        for i in 0..n {
            r_inv[(j, i)] *= root;
        }
    }
    Some(NtScaling {
        w_lin,
        lambda_lin,
        r,
        r_inv,
        lambda_psd: sigma,
    })
}

impl NtScaling {
    /// Ratio-test step bound keeping `(s + a ds, z + a dz)` in the cone.
    fn max_step(&self, s: &[f64], z: &[f64], ds: &[f64], dz: &[f64], m_lin: usize, n: usize) -> f64 {
        let mut a = f64::INFINITY;
        for i in 0..m_lin {
            if ds[i] < 0.0 {
                a = a.min(-s[i] / ds[i]);
            }
            if dz[i] < 0.0 {
                a = a.min(-z[i] / dz[i]);
            }
        }
        // scaled directions stay PSD iff a <= -1/min_eig of the scaled step
        let scaled = |m: &Matrix| {
            let mut out = m.clone();
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] /= sqrt(self.lambda_psd[i] * self.lambda_psd[j]);
                }
            }
            out
        };
        let hs = scaled(&smat(&ds[m_lin..], n).congruence(&self.r_inv));
        let hz = scaled(&self.r.transpose().matmul(&smat(&dz[m_lin..], n)).matmul(&self.r));
        for m in [hs, hz] {
            let e = min_eigenvalue(&m.symmetrized());
            if e < 0.0 {
                a = a.min(-1.0 / e);
            }
        }
        a
    }
}

/// How the per-iteration Newton system is solved.
///
/// Normal equations are the fast default; solution accuracy degrades as
/// roughly the squared condition number of the scaled system. The augmented
/// (indefinite, pivoted-LU) form costs more per iteration but keeps two to
/// three more digits near the optimum, and serves as the fallback when a
/// tight gap tolerance is not met on the fast path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KktBackend {
    NormalEquations,
    Augmented,
}

/// The svec-coordinates matrix of the congruence `X -> T X T`.
fn sym_kron(t: &Matrix) -> Matrix {
    let n = t.rows();
    let sc = svec_len(n);
    let mut out = Matrix::zeros(sc, sc);
    let rows: Vec<Vec<f64>> = (0..n).map(|i| t.row(i).to_vec()).collect();
    let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
    for (a, (i, j)) in svec_indices(n).enumerate() {
        let mut e = Matrix::zeros(n, n);
        if i == j {
            e.add_outer(1.0, &rows[i], &rows[i]);
        } else {
            e.add_outer(inv_sqrt2, &rows[i], &rows[j]);
            e.add_outer(inv_sqrt2, &rows[j], &rows[i]);
        }
        for (b, v) in svec(&e).into_iter().enumerate() {
            out[(b, a)] = v;
        }
    }
    out
}

enum KktSystem {
    Normal {
        chol: Matrix,
        m_kkt: Matrix,
        psi: Matrix,
        d_lin: Vec<f64>,
    },
    Augmented {
        lu: crate::linalg::LuFactors,
        k0: Matrix,
    },
}

impl KktSystem {
    fn build(
        cone: &ConeProblem,
        scal: &NtScaling,
        s: &[f64],
        z: &[f64],
        backend: KktBackend,
    ) -> Option<KktSystem> {
        let q = cone.c.len();
        let m_lin = cone.m_lin;
        let n = cone.n_psd;
        let sc = svec_len(n);
        match backend {
            KktBackend::NormalEquations => {
                // M = G' D G with D = blkdiag(z/s, Psi), Psi X = P X P,
                // P = (R R')^{-1}
                let p_mat = scal.r_inv.transpose().matmul(&scal.r_inv);
                let psi = sym_kron(&p_mat);
                let d_lin: Vec<f64> = (0..m_lin).map(|i| z[i] / s[i]).collect();
                let mut dg = Matrix::zeros(m_lin + sc, q);
                for r in 0..m_lin {
                    for cix in 0..q {
                        dg[(r, cix)] = d_lin[r] * cone.g[(r, cix)];
                    }
                }
                // psd rows of G are -I on the svec columns, so this block
                // is just -Psi
                for r in 0..sc {
                    for cix in 0..sc {
                        dg[(m_lin + r, (q - sc) + cix)] = -psi[(r, cix)];
                    }
                }
                let mut m_kkt = Matrix::zeros(q, q);
                for r in 0..(m_lin + sc) {
                    for i in 0..q {
                        let g_ri = cone.g[(r, i)];
                        if g_ri == 0.0 {
                            continue;
                        }
                        for j in 0..q {
                            m_kkt[(i, j)] += g_ri * dg[(r, j)];
                        }
                    }
                }
                let m_kkt = m_kkt.symmetrized();
                let chol = cholesky(&m_kkt).or_else(|| {
                    let mut bump = m_kkt.clone();
                    let trace: f64 = (0..q).map(|i| m_kkt[(i, i)]).sum();
                    let eps = 1e-12 * trace.max(1.0) / q as f64;
                    for i in 0..q {
                        bump[(i, i)] += eps;
                    }
                    cholesky(&bump)
                })?;
                Some(KktSystem::Normal {
                    chol,
                    m_kkt,
                    psi,
                    d_lin,
                })
            }
            KktBackend::Augmented => {
                // K = [0 G'; G -W'W], solved with partial pivoting; W'W has
                // diag(s/z) on the orthant block and X -> T X T, T = R R',
                // on the PSD block
                let t_mat = scal.r.matmul(&scal.r.transpose());
                let tt = sym_kron(&t_mat);
                let dim = q + m_lin + sc;
                let mut k0 = Matrix::zeros(dim, dim);
                for r in 0..(m_lin + sc) {
                    for cix in 0..q {
                        let v = cone.g[(r, cix)];
                        if v != 0.0 {
                            k0[(cix, q + r)] = v;
                            k0[(q + r, cix)] = v;
                        }
                    }
                }
                for i in 0..m_lin {
                    k0[(q + i, q + i)] = -s[i] / z[i];
                }
                for a in 0..sc {
                    for b in 0..sc {
                        k0[(q + m_lin + a, q + m_lin + b)] = -tt[(a, b)];
                    }
                }
                let lu = crate::linalg::lu_factor(&k0)?;
                Some(KktSystem::Augmented { lu, k0 })
            }
        }
    }

    /// Solves `G' dz = bx`, `G dx - W'W dz = bz` with iterative refinement.
    fn solve(&self, cone: &ConeProblem, bx: &[f64], bz: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let q = cone.c.len();
        let m_lin = cone.m_lin;
        match self {
            KktSystem::Normal {
                chol,
                m_kkt,
                psi,
                d_lin,
            } => {
                let apply_d = |v: &[f64]| -> Vec<f64> {
                    let mut out = Vec::with_capacity(v.len());
                    for i in 0..m_lin {
                        out.push(d_lin[i] * v[i]);
                    }
                    out.extend(psi.matvec(&v[m_lin..]));
                    out
                };
                let dbz = apply_d(bz);
                let mut rhs = cone.g.tr_matvec(&dbz);
                for (r, b) in rhs.iter_mut().zip(bx) {
                    *r += b;
                }
                let mut dx = cholesky_solve(chol, &rhs);
                // refinement: the matrix turns ill-conditioned near the
                // solution and raw solves lose digits
                for _ in 0..2 {
                    let mdx = m_kkt.matvec(&dx);
                    let resid: Vec<f64> = rhs.iter().zip(&mdx).map(|(a, b)| a - b).collect();
                    let corr = cholesky_solve(chol, &resid);
                    for (d, c) in dx.iter_mut().zip(&corr) {
                        *d += c;
                    }
                }
                let gdx = cone.g.matvec(&dx);
                let diff: Vec<f64> = gdx.iter().zip(bz).map(|(a, b)| a - b).collect();
                let dz = apply_d(&diff);
                (dx, dz)
            }
            KktSystem::Augmented { lu, k0 } => {
                let mut rhs = Vec::with_capacity(k0.rows());
                rhs.extend_from_slice(bx);
                rhs.extend_from_slice(bz);
                let mut sol = crate::linalg::lu_solve(lu, &rhs);
                for _ in 0..2 {
                    let ks = k0.matvec(&sol);
                    let resid: Vec<f64> = rhs.iter().zip(&ks).map(|(a, b)| a - b).collect();
                    let corr = crate::linalg::lu_solve(lu, &resid);
                    for (s, c) in sol.iter_mut().zip(&corr) {
                        *s += c;
                    }
                }
                let dz = sol.split_off(q);
                (sol, dz)
            }
        }
    }
}

fn cone_solve(
    cone: &ConeProblem,
    gap_tol: f64,
    feas_tol: f64,
    max_iter: usize,
    backend: KktBackend,
) -> ConeRun {
    let q = cone.c.len();
    let m_lin = cone.m_lin;
    let n = cone.n_psd;
    let sc = svec_len(n);
    let nu = (m_lin + n) as f64;

    let mut x = vec![0.0; q];
    let eye_svec = svec(&Matrix::identity(n));
    let mut s = vec![1.0; m_lin];
    s.extend_from_slice(&eye_svec);
    let mut z = s.clone();

    let mut best: Option<(Vec<f64>, Vec<f64>, Vec<f64>)> = None;
    let mut best_merit = f64::INFINITY;
    let mut no_improve = 0usize;
    let mut exit = LoopExit::MaxIter;
    let mut iterations = 0usize;

    for it in 0..max_iter {
        iterations = it;
        let mut rd = cone.g.tr_matvec(&z);
        for (r, c) in rd.iter_mut().zip(&cone.c) {
            *r += c;
        }
        let mut rp = cone.g.matvec(&x);
        for ((r, sv), hv) in rp.iter_mut().zip(&s).zip(&cone.h) {
            *r += sv - hv;
        }
        let gap: f64 = s.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mu = gap / nu;
        let res = inf_norm(&rp).max(inf_norm(&rd));
        // the quantity certified downstream is the objective difference
        // c'x + h'z, not the complementarity; steer and select on it
        let pobj: f64 = cone.c.iter().zip(&x).map(|(a, b)| a * b).sum();
        let dobj_neg: f64 = cone.h.iter().zip(&z).map(|(a, b)| a * b).sum();
        let obj_gap = (pobj + dobj_neg).abs();
        let merit = res.max(obj_gap);

        if merit < 0.99 * best_merit {
            best_merit = merit;
            best = Some((x.clone(), s.clone(), z.clone()));
            no_improve = 0;
        } else {
            no_improve += 1;
        }
        if res < feas_tol && obj_gap < gap_tol {
            exit = LoopExit::Converged;
            best = Some((x.clone(), s.clone(), z.clone()));
            break;
        }
        // transient merit spikes recover, so only persistent stagnation
        // ends the loop; the best iterate is kept either way
        if no_improve >= 12 {
            exit = LoopExit::Stalled;
            break;
        }

        let Some(scal) = compute_scaling(&s, &z, m_lin, n) else {
            exit = LoopExit::Breakdown;
            break;
        };
        let Some(kkt) = KktSystem::build(cone, &scal, &s, &z, backend) else {
            exit = LoopExit::Breakdown;
            break;
        };
        let solve_kkt = |bx: &[f64], bz: &[f64]| kkt.solve(cone, bx, bz);

        // affine predictor: bz = -rp + s (scaled complementarity -lambda^2)
        let neg_rd: Vec<f64> = rd.iter().map(|v| -v).collect();
        let bz_aff: Vec<f64> = rp.iter().zip(&s).map(|(r, sv)| -r + sv).collect();
        let (dx_aff, dz_aff) = solve_kkt(&neg_rd, &bz_aff);
        let gdx = cone.g.matvec(&dx_aff);
        let ds_aff: Vec<f64> = rp.iter().zip(&gdx).map(|(r, g)| -r - g).collect();

        let a_aff = scal
            .max_step(&s, &z, &ds_aff, &dz_aff, m_lin, n)
            .min(1.0);
        let gap_aff: f64 = s
            .iter()
            .zip(&ds_aff)
            .zip(z.iter().zip(&dz_aff))
            .map(|((sv, dsv), (zv, dzv))| (sv + a_aff * dsv) * (zv + a_aff * dzv))
            .sum();
        let sigma = (gap_aff / gap).clamp(0.0, 1.0);
        let sigma = sigma * sigma * sigma;

        // combined corrector step
        let mut w_ulam = vec![0.0; m_lin + sc];
        for i in 0..m_lin {
            let ds_bar = ds_aff[i] / scal.w_lin[i];
            let dz_bar = scal.w_lin[i] * dz_aff[i];
            let dcomp = sigma * mu - scal.lambda_lin[i] * scal.lambda_lin[i] - ds_bar * dz_bar;
            w_ulam[i] = scal.w_lin[i] * dcomp / scal.lambda_lin[i];
        }
        {
            let ds_bar = smat(&ds_aff[m_lin..], n).congruence(&scal.r_inv);
            let dz_bar = scal
                .r
                .transpose()
                .matmul(&smat(&dz_aff[m_lin..], n))
                .matmul(&scal.r);
            let cross = ds_bar.matmul(&dz_bar);
            let mut dcomp = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let sym = 0.5 * (cross[(i, j)] + cross[(j, i)]);
                    let mut v = -sym;
                    if i == j {
                        v += sigma * mu - scal.lambda_psd[i] * scal.lambda_psd[i];
                    }
                    dcomp[(i, j)] = v;
                }
            }
            // lambda^{-1} o dcomp, then W' applied: R u R'
            let mut u = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    u[(i, j)] = 2.0 * dcomp[(i, j)] / (scal.lambda_psd[i] + scal.lambda_psd[j]);
                }
            }
            let wt = u.congruence(&scal.r);
            for (idx, v) in svec(&wt).into_iter().enumerate() {
                w_ulam[m_lin + idx] = v;
            }
        }
        let bz: Vec<f64> = rp
            .iter()
            .zip(&w_ulam)
            .map(|(r, w)| -r - w)
            .collect();
        let (dx, dz) = solve_kkt(&neg_rd, &bz);
        let gdx = cone.g.matvec(&dx);
        let ds: Vec<f64> = rp.iter().zip(&gdx).map(|(r, g)| -r - g).collect();

        let mut alpha = (0.98 * scal.max_step(&s, &z, &ds, &dz, m_lin, n)).min(1.0);
        // fp safety: back off until both blocks factor
        let mut accepted = false;
        for _ in 0..20 {
            let s_try: Vec<f64> = s.iter().zip(&ds).map(|(a, d)| a + alpha * d).collect();
            let z_try: Vec<f64> = z.iter().zip(&dz).map(|(a, d)| a + alpha * d).collect();
            let lin_ok = s_try[..m_lin].iter().all(|&v| v > 0.0)
                && z_try[..m_lin].iter().all(|&v| v > 0.0);
            let psd_ok = lin_ok && {
                let bump = |v: &[f64]| {
                    let mut m = smat(&v[m_lin..], n);
                    let tr: f64 = (0..n).map(|i| m[(i, i)].abs()).sum::<f64>() + 1.0;
                    for i in 0..n {
                        m[(i, i)] += 1e-14 * tr;
                    }
                    m
                };
                cholesky(&bump(&s_try)).is_some() && cholesky(&bump(&z_try)).is_some()
            };
            if psd_ok {
                s = s_try;
                z = z_try;
                for (xv, d) in x.iter_mut().zip(&dx) {
                    *xv += alpha * d;
                }
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            exit = LoopExit::Breakdown;
            break;
        }
    }

    let (x, _, z) = best.unwrap_or((x, s, z));
    ConeRun {
        x,
        z,
        exit,
        iterations,
    }
}

/// Convenience: assemble and solve in one call.
pub fn solve_instance(
    spec: &SmoothProblemSpec,
    schedule: &StepSchedule,
    options: &SolveOptions,
) -> Result<SdpSolution, CoreError> {
    solve(&assemble_pep(spec, schedule), options)
}
