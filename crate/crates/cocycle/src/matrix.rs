//! Dense complex linear algebra: Hermitian eigendecomposition via cyclic
//! Jacobi rotations, numerical null spaces, unitarity tests, and the matrix
//! arithmetic the rest of the crate is built on.

use num_complex::Complex64;
use thiserror::Error;

/// Default relative tolerance for the numeric predicates in this module.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Off-diagonal Frobenius threshold at which a Jacobi sweep is considered
/// converged (scaled by `1 + ||M||_F`).
const JACOBI_OFF_THRESHOLD: f64 = 1e-12;

/// Maximum number of cyclic Jacobi sweeps before giving up.
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian {
        #[doc(hidden)]
        defect: OrderedF64,
        tol: OrderedF64,
    },
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
}

/// f64 wrapper so `MatrixError` can derive `Eq` for test matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderedF64(pub f64);
impl Eq for OrderedF64 {}
impl std::fmt::Display for OrderedF64 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl std::fmt::LowerExp for OrderedF64 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::LowerExp::fmt(&self.0, f)
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from nested rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[Vec<Complex64>]) -> Self {
        let mut m = Self::zeros(dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length mismatch");
            for i in 0..dim {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matvec");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..self.cols {
                acc += self[(i, k)] * v[k];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn distance(&self, other: &CMatrix) -> f64 {
        self.sub(other).frobenius_norm()
    }

    /// `||M - M^dagger||_F`, zero exactly when Hermitian.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Block-diagonal concatenation `diag(self, other)`.
    pub fn direct_sum(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Determinant via LU factorization with partial pivoting.
    pub fn det(&self) -> Complex64 {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let mut a = self.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| {
                    a[(i, k)]
                        .norm_sqr()
                        .partial_cmp(&a[(j, k)].norm_sqr())
                        .unwrap()
                })
                .unwrap();
            if a[(pivot, k)].norm_sqr() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / a[(k, k)];
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.entries[r * self.cols + c]
    }
}

impl std::ops::Mul<&CMatrix> for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix::mul(self, rhs)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `values` are real and ascending; the columns of `vectors` are the matching
/// orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Hermitian eigendecomposition with the default Hermiticity tolerance.
pub fn hermitian_eig(m: &CMatrix) -> Result<EigenResult, MatrixError> {
    hermitian_eig_with_tol(m, DEFAULT_TOL)
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The input must satisfy `||M - M^dagger||_F <= tol * (1 + ||M||_F)`; the
/// residual asymmetry is symmetrized away before iterating. Sweeps run until
/// the off-diagonal Frobenius mass drops below `1e-12 * (1 + ||M||_F)`.
/// Deterministic for identical input bits.
pub fn hermitian_eig_with_tol(m: &CMatrix, tol: f64) -> Result<EigenResult, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let scale = 1.0 + m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect > tol * scale {
        return Err(MatrixError::NotHermitian {
            defect: OrderedF64(defect),
            tol: OrderedF64(tol * scale),
        });
    }

    // Work on the Hermitian part so diagonals are exactly real.
    let mut a = CMatrix::from_fn(n, n, |i, j| {
        let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
        if i == j {
            Complex64::new(avg.re, 0.0)
        } else {
            avg
        }
    });
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_OFF_THRESHOLD * scale;

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r * (n * n) as f64 <= threshold {
                    continue;
                }
                // Factor out the phase so the 2x2 block becomes real
                // symmetric, then apply the classic Jacobi rotation.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Plane rotation J: J[p][p]=c, J[p][q]=s, J[q][p]=-s*conj(phase),
                // J[q][q]=c*conj(phase). Updates below apply A <- J^dag A J, V <- V J.
                let jp = Complex64::new(c, 0.0);
                let js = Complex64::new(s, 0.0);
                let jqp = -js * phase.conj();
                let jqq = jp * phase.conj();
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jp + akq * jqp;
                    a[(k, q)] = akp * js + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = js.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jp + vkq * jqp;
                    v[(k, q)] = vkp * js + vkq * jqq;
                }
            }
        }
    }
    if !converged {
        // One final threshold check: the last sweep may have finished the job.
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() > threshold {
            return Err(MatrixError::NoConvergence(JACOBI_MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenResult { values, vectors })
}

/// Orthonormal basis of the numerical kernel `{v : ||Mv|| <= tol * ||v|| * (1 + ||M||_F)}`.
///
/// Right singular directions are obtained from the Hermitian
/// eigendecomposition of `M^dagger M`; membership is then decided by the
/// directly computed residual `||Mv||`, which avoids the squared-spectrum
/// precision loss near the threshold. Returns an empty list for a trivial
/// kernel.
pub fn null_space(m: &CMatrix, tol: f64) -> Vec<Vec<Complex64>> {
    assert!(tol > 0.0, "null_space tolerance must be positive");
    if m.cols == 0 {
        return Vec::new();
    }
    let scale = 1.0 + m.frobenius_norm();
    if m.rows == 0 {
        // Zero map: everything is in the kernel.
        return (0..m.cols)
            .map(|j| {
                let mut v = vec![Complex64::new(0.0, 0.0); m.cols];
                v[j] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
    }
    let gram = m.adjoint().mul(m);
    let eig = hermitian_eig_with_tol(&gram, 1e-6).expect("Gram matrix is Hermitian");
    let mut basis = Vec::new();
    for j in 0..m.cols {
        let v = eig.vectors.column(j);
        let residual = norm2(&m.matvec(&v));
        if residual <= tol * scale {
            basis.push(v);
        }
    }
    basis
}

/// True iff `||M^dagger M - I||_F <= tol`. Non-square input is never unitary.
pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let gram = m.adjoint().mul(m);
    gram.distance(&CMatrix::identity(m.rows)) <= tol
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Modified Gram-Schmidt. Vectors that collapse below `drop_tol` after
/// projection are discarded; survivors come back orthonormal.
pub fn orthonormalize(vectors: &[Vec<Complex64>], drop_tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = inner(&w, b);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= coeff * bi;
                }
            }
        }
        let norm = norm2(&w);
        if norm > drop_tol {
            for wi in &mut w {
                *wi /= norm;
            }
            basis.push(w);
        }
    }
    basis
}
