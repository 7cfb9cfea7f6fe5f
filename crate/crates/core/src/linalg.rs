//! Small complex linear-algebra helpers shared by the Toeplitz structures
//! and the SDP solver: a validated Hermitian wrapper, eigendecompositions,
//! and Frobenius-norm utilities over `faer` matrices.

use faer::linalg::solvers::DenseSolveCore;
use faer::{Mat, Side};
use num_complex::Complex64;
use thiserror::Error;

/// Relative tolerance used when validating Hermitian symmetry.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("eigendecomposition failed for side {side} (frobenius norm {norm:.3e})")]
    EigFailure { side: usize, norm: f64 },
}

/// Square complex matrix that equals its conjugate transpose within
/// [`HERMITIAN_TOL`] relative tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: Mat<Complex64>,
}

impl HermitianMatrix {
    /// Validates squareness and Hermitian symmetry.
    pub fn new(mat: Mat<Complex64>) -> Result<Self, LinalgError> {
        if mat.nrows() != mat.ncols() {
            return Err(LinalgError::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let scale = mat.norm_max().max(1.0);
        let mut deviation = 0.0f64;
        for i in 0..mat.nrows() {
            for j in i..mat.ncols() {
                let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if deviation > HERMITIAN_TOL * scale {
            return Err(LinalgError::NotHermitian {
                deviation,
                tol: HERMITIAN_TOL * scale,
            });
        }
        Ok(Self { mat })
    }

    /// Forces Hermitian symmetry by averaging with the conjugate transpose.
    pub fn symmetrize(mat: Mat<Complex64>) -> Self {
        let n = mat.nrows().min(mat.ncols());
        let mut out = Mat::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = 0.5 * (mat[(i, j)] + mat[(j, i)].conj());
            }
        }
        // the averaged diagonal keeps a zero imaginary part exactly
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
        }
        Self { mat: out }
    }

    pub fn side(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<Complex64> {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.side()).map(|i| self.mat[(i, i)].re).sum()
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: Mat<Complex64>,
}

/// Full eigendecomposition; the input is symmetrized first so callers may
/// pass matrices that are Hermitian only up to floating-point noise.
pub fn hermitian_eig(mat: &Mat<Complex64>) -> Result<HermitianEig, LinalgError> {
    let h = HermitianMatrix::symmetrize(mat.clone());
    let side = h.side();
    let evd = h
        .as_mat()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| LinalgError::EigFailure {
            side,
            norm: mat.norm_l2(),
        })?;
    let mut values: Vec<f64> = evd
        .S()
        .column_vector()
        .iter()
        .map(|v| v.re)
        .collect();
    let mut vectors = evd.U().to_owned();
    // faer does not guarantee an ordering; sort ascending for stable reuse
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    if order.windows(2).any(|w| w[0] > w[1]) {
        let sorted_vals: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let mut sorted_vecs = Mat::<Complex64>::zeros(side, side);
        for (dst, &src) in order.iter().enumerate() {
            for r in 0..side {
                sorted_vecs[(r, dst)] = vectors[(r, src)];
            }
        }
        values = sorted_vals;
        vectors = sorted_vecs;
    }
    Ok(HermitianEig { values, vectors })
}

/// Smallest eigenvalue of a (numerically) Hermitian matrix.
pub fn min_eigenvalue(mat: &Mat<Complex64>) -> Result<f64, LinalgError> {
    Ok(hermitian_eig(mat)?
        .values
        .first()
        .copied()
        .unwrap_or(0.0))
}

/// Inverse of a Hermitian positive definite matrix via Cholesky, with the
/// result re-symmetrized.
pub fn hermitian_pd_inverse(mat: &Mat<Complex64>) -> Result<Mat<Complex64>, LinalgError> {
    let llt = mat.llt(Side::Lower).map_err(|_| LinalgError::EigFailure {
        side: mat.nrows(),
        norm: mat.norm_l2(),
    })?;
    Ok(HermitianMatrix::symmetrize(llt.inverse()).into_mat())
}

/// Real Frobenius inner product `Re tr(A^H B)`.
pub fn frob_inner(a: &Mat<Complex64>, b: &Mat<Complex64>) -> f64 {
    debug_assert_eq!(a.nrows(), b.nrows());
    debug_assert_eq!(a.ncols(), b.ncols());
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += (a[(i, j)].conj() * b[(i, j)]).re;
        }
    }
    acc
}

/// `trace(W * A)` for Hermitian `W`, `A`; the value is real.
pub fn trace_product(w: &Mat<Complex64>, a: &Mat<Complex64>) -> f64 {
    // tr(WA) = <W^H, A>_F = <W, A>_F for Hermitian W
    frob_inner(w, a)
}

/// Outer product `v v^H` scaled by `scale`.
pub fn scaled_outer(v: &[Complex64], scale: f64) -> Mat<Complex64> {
    let n = v.len();
    Mat::from_fn(n, n, |i, j| scale * v[i] * v[j].conj())
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(&x, &y)| x.conj() * y).sum()
}
