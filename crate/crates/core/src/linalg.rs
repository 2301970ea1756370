//! Small dense linear algebra: just enough for Gram matrices up to 64x64.
//!
//! Everything is row-major `f64` with no blocking or sparsity. The
//! eigensolver is cyclic Jacobi and the SVD is one-sided Jacobi; both are
//! slow asymptotically but accurate and dependency-free, which is what the
//! desk-scale semidefinite solves here need.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::num::{hypot2, sqrt};

const SQRT_2: f64 = core::f64::consts::SQRT_2;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds from nested rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    pub fn tr_matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let vi = v[i];
            if vi == 0.0 {
                continue;
            }
            let row = self.row(i);
            for j in 0..self.cols {
                out[j] += row[j] * vi;
            }
        }
        out
    }

    /// `self += c * rhs`, shapes must match.
    pub fn scaled_add(&mut self, c: f64, rhs: &Matrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += c * b;
        }
    }

    pub fn scale(&mut self, c: f64) {
        for a in &mut self.data {
            *a *= c;
        }
    }

    /// `(A + A^T) / 2`.
    pub fn symmetrized(&self) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut s = Matrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                s[(i, j)] = 0.5 * (self[(i, j)] + self[(j, i)]);
            }
        }
        s
    }

    /// Elementwise inner product; equals `tr(A B)` when both are symmetric.
    pub fn frob_inner(&self, rhs: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut acc = 0.0;
        for (a, b) in self.data.iter().zip(&rhs.data) {
            acc += a * b;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for &a in &self.data {
            m = m.max(a.abs());
        }
        m
    }

    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut m = 0.0f64;
        for (a, b) in self.data.iter().zip(&rhs.data) {
            m = m.max((a - b).abs());
        }
        m
    }

    /// Rank-one update `self += c * a b^T`.
    pub fn add_outer(&mut self, c: f64, a: &[f64], b: &[f64]) {
        assert_eq!(self.rows, a.len());
        assert_eq!(self.cols, b.len());
        for i in 0..self.rows {
            let ca = c * a[i];
            if ca == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                self.data[i * self.cols + j] += ca * b[j];
            }
        }
    }

    /// Congruence `P * self * P^T`.
    pub fn congruence(&self, p: &Matrix) -> Matrix {
        p.matmul(self).matmul(&p.transpose())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
/// or `None` if the matrix is not numerically positive definite.
pub fn cholesky(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let dj = sqrt(d);
        l[(j, j)] = dj;
        for i in (j + 1)..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / dj;
        }
    }
    Some(l)
}

/// Solves `L L^T x = b` given the lower Cholesky factor.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y = b.to_vec();
    for i in 0..n {
        let mut v = y[i];
        for k in 0..i {
            v -= l[(i, k)] * y[k];
        }
        y[i] = v / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut v = y[i];
        for k in (i + 1)..n {
            v -= l[(k, i)] * y[k];
        }
        y[i] = v / l[(i, i)];
    }
    y
}

/// Inverse of a lower-triangular matrix by forward substitution.
pub fn lower_tri_inverse(l: &Matrix) -> Matrix {
    let n = l.rows();
    let mut inv = Matrix::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut v = if i == col { 1.0 } else { 0.0 };
            for k in col..i {
                v -= l[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = v / l[(i, i)];
        }
    }
    inv
}

/// Dense LU factorization with partial pivoting, `P A = L U` packed in one
/// matrix. Returns `None` when the matrix is numerically singular.
pub struct LuFactors {
    lu: Matrix,
    perm: Vec<usize>,
}

pub fn lu_factor(m: &Matrix) -> Option<LuFactors> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot = col;
        let mut biggest = lu[(col, col)].abs();
        for r in (col + 1)..n {
            let v = lu[(r, col)].abs();
            if v > biggest {
                biggest = v;
                pivot = r;
            }
        }
        if !(biggest > 0.0) || !biggest.is_finite() {
            return None;
        }
        if pivot != col {
            perm.swap(pivot, col);
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
        }
        let d = lu[(col, col)];
        for r in (col + 1)..n {
            let factor = lu[(r, col)] / d;
            lu[(r, col)] = factor;
            if factor == 0.0 {
                continue;
            }
            for j in (col + 1)..n {
                let v = factor * lu[(col, j)];
                lu[(r, j)] -= v;
            }
        }
    }
    Some(LuFactors { lu, perm })
}

pub fn lu_solve(f: &LuFactors, b: &[f64]) -> Vec<f64> {
    let n = f.lu.rows();
    let mut y: Vec<f64> = f.perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        let mut v = y[i];
        for k in 0..i {
            v -= f.lu[(i, k)] * y[k];
        }
        y[i] = v;
    }
    for i in (0..n).rev() {
        let mut v = y[i];
        for k in (i + 1)..n {
            v -= f.lu[(i, k)] * y[k];
        }
        y[i] = v / f.lu[(i, i)];
    }
    y
}

/// Eigendecomposition of a symmetric matrix.
pub struct SymEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, same order as `values`.
    pub vectors: Matrix,
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
pub fn sym_eigh(m: &Matrix) -> SymEig {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a = m.symmetrized();
    let mut v = Matrix::identity(n);
    if n == 1 {
        return SymEig {
            values: vec![a[(0, 0)]],
            vectors: v,
        };
    }

    let frob = sqrt(a.frob_inner(&a)).max(f64::MIN_POSITIVE);
    let tol = 1e-15 * frob;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= tol * 1e-2 {
                    continue;
                }
                let h = a[(q, q)] - a[(p, p)];
                // tan of the rotation angle, smaller-magnitude root
                let t = if apq.abs() * 1e15 < h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + hypot2(1.0, theta));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / hypot2(1.0, t);
                let s = t * c;
                let tau = s / (1.0 + c);
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        a[(r, p)] = arp - s * (arq + tau * arp);
                        a[(p, r)] = a[(r, p)];
                        a[(r, q)] = arq + s * (arp - tau * arq);
                        a[(q, r)] = a[(r, q)];
                    }
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = c * vrp - s * vrq;
                    v[(r, q)] = s * vrp + c * vrq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    SymEig { values, vectors }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    sym_eigh(m).values[0]
}

/// Largest eigenvalue of a symmetric matrix.
pub fn max_eigenvalue(m: &Matrix) -> f64 {
    *sym_eigh(m).values.last().unwrap()
}

/// One-sided Jacobi SVD of a square nonsingular matrix: `m = U diag(s) V^T`.
///
/// Singular values come out unordered, which is all the NT scaling needs.
pub fn jacobi_svd(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut u = m.clone();
    let mut v = Matrix::identity(n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for r in 0..n {
                    let up = u[(r, p)];
                    let uq = u[(r, q)];
                    app += up * up;
                    aqq += uq * uq;
                    apq += up * uq;
                }
                if apq.abs() <= 1e-15 * sqrt(app * aqq) {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = {
                    let t = 1.0 / (zeta.abs() + hypot2(1.0, zeta));
                    if zeta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / hypot2(1.0, t);
                let s = c * t;
                for r in 0..n {
                    let up = u[(r, p)];
                    let uq = u[(r, q)];
                    u[(r, p)] = c * up - s * uq;
                    u[(r, q)] = s * up + c * uq;
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = c * vp - s * vq;
                    v[(r, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma = vec![0.0; n];
    for j in 0..n {
        let mut norm = 0.0;
        for r in 0..n {
            norm += u[(r, j)] * u[(r, j)];
        }
        let norm = sqrt(norm);
        sigma[j] = norm;
        if norm > 0.0 {
            for r in 0..n {
                u[(r, j)] /= norm;
            }
        }
    }
    (u, sigma, v)
}

/// Length of the packed symmetric (svec) representation.
#[inline]
pub fn svec_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Packs a symmetric matrix into svec form with `sqrt(2)`-scaled
/// off-diagonals, so `svec(A) . svec(B) = tr(A B)`.
///
/// Index order: `(0,0), (0,1), (1,1), (0,2), ...` (upper triangle by column).
pub fn svec(m: &Matrix) -> Vec<f64> {
    let n = m.rows();
    let mut out = Vec::with_capacity(svec_len(n));
    for j in 0..n {
        for i in 0..=j {
            if i == j {
                out.push(m[(i, i)]);
            } else {
                out.push(SQRT_2 * m[(i, j)]);
            }
        }
    }
    out
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], n: usize) -> Matrix {
    debug_assert_eq!(v.len(), svec_len(n));
    let mut m = Matrix::zeros(n, n);
    let mut a = 0;
    for j in 0..n {
        for i in 0..=j {
            if i == j {
                m[(i, i)] = v[a];
            } else {
                let x = v[a] / SQRT_2;
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
            a += 1;
        }
    }
    m
}

/// Iterates `(i, j)` pairs in svec order.
pub fn svec_indices(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (0..=j).map(move |i| (i, j)))
}
