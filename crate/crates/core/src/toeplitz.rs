//! Hermitian Toeplitz structures parameterizing the atomic-norm SDPs.
//!
//! A one-level lag vector `u` of length `K` expands to the `K x K` Hermitian
//! Toeplitz matrix with entry `(i, j) = u[i - j]` for `i >= j` and the
//! conjugate above the diagonal. A two-level lag table indexed by
//! `(k1, k2)`, `k1 in 0..N`, `k2 in -(M-1)..=M-1`, expands to the `MN x MN`
//! Hermitian block-Toeplitz matrix with Toeplitz blocks: block `(n, n')` for
//! `n >= n'` is the `M x M` Toeplitz matrix with entry
//! `(m, m') = u(n - n', m - m')`. Row/column index `(n, m)` flattens as
//! `n*M + m`, matching the column-major vectorization of an `M x N` matrix.
//!
//! `lag_project_*` is the adjoint/averaging step required by first-order
//! solvers: it maps an arbitrary Hermitian matrix to the lag table whose
//! expansion is the orthogonal (Frobenius) projection onto the Toeplitz
//! subspace. `psd_project` clips negative eigenvalues. `vandermonde_retrieve`
//! decomposes a PSD Toeplitz matrix into steering-vector components as a
//! diagnostic.

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::{Mat, Side};
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, HermitianEig, HermitianMatrix};

#[derive(Debug, Error)]
pub enum ToeplitzError {
    #[error("invalid lag: u[0] must be real, got imaginary part {im:.3e}")]
    NonRealLeadingLag { im: f64 },
    #[error("invalid lag table: {0}")]
    InvalidLagTable(String),
    #[error("side mismatch: matrix side {side}, expected {expected}")]
    SideMismatch { side: usize, expected: usize },
    #[error("retrieval rank {rank} must be in 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("matrix is not PSD within tolerance: min eigenvalue {min_eig:.3e}")]
    NotPsd { min_eig: f64 },
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
}

/// Lags of a `K x K` Hermitian Toeplitz matrix; `u[0]` is the (real)
/// diagonal value.
#[derive(Debug, Clone, PartialEq)]
pub struct OneLevelLagVector {
    lags: Vec<Complex64>,
}

impl OneLevelLagVector {
    pub fn new(lags: Vec<Complex64>) -> Result<Self, ToeplitzError> {
        if lags.is_empty() {
            return Err(ToeplitzError::InvalidLagTable("empty lag vector".into()));
        }
        let scale = lags[0].re.abs().max(1.0);
        if lags[0].im.abs() > 1e-9 * scale {
            return Err(ToeplitzError::NonRealLeadingLag { im: lags[0].im });
        }
        let mut lags = lags;
        lags[0] = Complex64::new(lags[0].re, 0.0);
        Ok(Self { lags })
    }

    pub fn zeros(k: usize) -> Self {
        Self {
            lags: vec![Complex64::default(); k],
        }
    }

    pub fn side(&self) -> usize {
        self.lags.len()
    }

    pub fn lags(&self) -> &[Complex64] {
        &self.lags
    }

    /// Adds `bump` to the zero lag, shifting the expansion by `bump * I`.
    pub fn bump_diagonal(&mut self, bump: f64) {
        self.lags[0] += bump;
    }
}

/// Lags of an `MN x MN` Hermitian two-level Toeplitz matrix.
///
/// Stored as an `N x (2M - 1)` table; column `k2 + (M - 1)` holds intra-block
/// lag `k2`. Lags with negative block index follow from Hermitian symmetry
/// `u(-k1, -k2) = conj(u(k1, k2))`, and row `k1 = 0` satisfies that symmetry
/// internally.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelLagTable {
    m: usize,
    n: usize,
    lags: Mat<Complex64>,
}

impl TwoLevelLagTable {
    pub fn new(m: usize, n: usize, lags: Mat<Complex64>) -> Result<Self, ToeplitzError> {
        if m == 0 || n == 0 {
            return Err(ToeplitzError::InvalidLagTable("dims must be positive".into()));
        }
        if lags.nrows() != n || lags.ncols() != 2 * m - 1 {
            return Err(ToeplitzError::InvalidLagTable(format!(
                "table is {}x{}, expected {}x{} for dims (M={m}, N={n})",
                lags.nrows(),
                lags.ncols(),
                n,
                2 * m - 1
            )));
        }
        let scale = lags.norm_max().max(1.0);
        let zero = lags[(0, m - 1)];
        if zero.im.abs() > 1e-9 * scale {
            return Err(ToeplitzError::NonRealLeadingLag { im: zero.im });
        }
        for k2 in 1..m {
            let fwd = lags[(0, m - 1 + k2)];
            let bwd = lags[(0, m - 1 - k2)];
            if (fwd - bwd.conj()).norm() > 1e-9 * scale {
                return Err(ToeplitzError::InvalidLagTable(format!(
                    "row k1=0 violates u(0,-k2) = conj(u(0,k2)) at k2={k2}"
                )));
            }
        }
        let mut lags = lags;
        lags[(0, m - 1)] = Complex64::new(zero.re, 0.0);
        Ok(Self { m, n, lags })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            lags: Mat::zeros(n, 2 * m - 1),
        }
    }

    /// Table whose expansion is the identity matrix.
    pub fn identity(m: usize, n: usize) -> Self {
        let mut t = Self::zeros(m, n);
        t.lags[(0, m - 1)] = Complex64::new(1.0, 0.0);
        t
    }

    /// `(M, N)`: intra-block side and block count.
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn side(&self) -> usize {
        self.m * self.n
    }

    /// Lag `(k1, k2)` with `k1 in 0..N`, `k2 in -(M-1)..=M-1`.
    pub fn get(&self, k1: usize, k2: isize) -> Complex64 {
        self.lags[(k1, (k2 + self.m as isize - 1) as usize)]
    }

    pub fn set(&mut self, k1: usize, k2: isize, value: Complex64) {
        self.lags[(k1, (k2 + self.m as isize - 1) as usize)] = value;
    }

    /// Adds `bump` to the `(0, 0)` lag, shifting the expansion by `bump * I`.
    pub fn bump_diagonal(&mut self, bump: f64) {
        let c = self.m - 1;
        self.lags[(0, c)] += bump;
    }
}

/// Expands one-level lags into the Hermitian Toeplitz matrix they define.
pub fn expand_one_level(u: &OneLevelLagVector) -> HermitianMatrix {
    let k = u.side();
    let lags = u.lags();
    let mat = Mat::from_fn(k, k, |i, j| {
        if i >= j {
            lags[i - j]
        } else {
            lags[j - i].conj()
        }
    });
    HermitianMatrix::new(mat).expect("toeplitz expansion is Hermitian by construction")
}

/// Expands a two-level lag table into the `MN x MN` Hermitian matrix it
/// defines; index `(n, m)` flattens as `n*M + m`.
pub fn expand_two_level(u: &TwoLevelLagTable) -> HermitianMatrix {
    let (m, n) = u.dims();
    let side = m * n;
    let mat = Mat::from_fn(side, side, |row, col| {
        let (bn, bm) = (row / m, row % m);
        let (bn2, bm2) = (col / m, col % m);
        let k2 = bm as isize - bm2 as isize;
        if bn >= bn2 {
            u.get(bn - bn2, k2)
        } else {
            u.get(bn2 - bn, -k2).conj()
        }
    });
    HermitianMatrix::new(mat).expect("two-level expansion is Hermitian by construction")
}

/// Orthogonal projection of `g` onto one-level Hermitian Toeplitz matrices,
/// returned as the lag vector: each lag is the mean of the entries sharing
/// that diagonal, with the zero lag taking the real diagonal mean.
pub fn lag_project_one(g: &HermitianMatrix) -> OneLevelLagVector {
    let k = g.side();
    let m = g.as_mat();
    let mut lags = vec![Complex64::default(); k];
    for lag in 0..k {
        let mut acc = Complex64::default();
        for i in lag..k {
            acc += m[(i, i - lag)];
        }
        lags[lag] = acc / (k - lag) as f64;
    }
    lags[0] = Complex64::new(lags[0].re, 0.0);
    OneLevelLagVector::new(lags).expect("projected lags are valid")
}

/// Two-level analogue of [`lag_project_one`]; `g` must have side `m * n`.
pub fn lag_project_two(
    g: &HermitianMatrix,
    m: usize,
    n: usize,
) -> Result<TwoLevelLagTable, ToeplitzError> {
    if g.side() != m * n {
        return Err(ToeplitzError::SideMismatch {
            side: g.side(),
            expected: m * n,
        });
    }
    let gm = g.as_mat();
    let mut table = TwoLevelLagTable::zeros(m, n);
    for k1 in 0..n {
        let k2_lo = if k1 == 0 { 0 } else { -(m as isize - 1) };
        for k2 in k2_lo..m as isize {
            let mut acc = Complex64::default();
            let mut count = 0usize;
            for bn in k1..n {
                let bn2 = bn - k1;
                let (m_lo, m_hi) = if k2 >= 0 {
                    (k2 as usize, m)
                } else {
                    (0, (m as isize + k2) as usize)
                };
                for bm in m_lo..m_hi {
                    let bm2 = (bm as isize - k2) as usize;
                    acc += gm[(bn * m + bm, bn2 * m + bm2)];
                    count += 1;
                }
            }
            table.set(k1, k2, acc / count as f64);
        }
    }
    // mirror the k1 = 0 row so its internal Hermitian symmetry is exact
    for k2 in 1..m as isize {
        let v = table.get(0, k2);
        table.set(0, -k2, v.conj());
    }
    let c = table.get(0, 0);
    table.set(0, 0, Complex64::new(c.re, 0.0));
    Ok(table)
}

/// Nearest (Frobenius) positive semidefinite matrix: eigendecompose, clip
/// negative eigenvalues to zero, reassemble.
pub fn psd_project(g: &HermitianMatrix) -> Result<HermitianMatrix, ToeplitzError> {
    let eig = linalg::hermitian_eig(g.as_mat())?;
    Ok(reassemble_clipped(&eig, g.side()))
}

fn reassemble_clipped(eig: &HermitianEig, side: usize) -> HermitianMatrix {
    let mut scaled = Mat::<Complex64>::zeros(side, side);
    for k in 0..side {
        let lam = eig.values[k].max(0.0);
        if lam == 0.0 {
            continue;
        }
        for i in 0..side {
            scaled[(i, k)] = lam * eig.vectors[(i, k)];
        }
    }
    let rebuilt = &scaled * eig.vectors.adjoint();
    HermitianMatrix::symmetrize(rebuilt)
}

/// One steering component recovered from a PSD Toeplitz matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralComponent {
    /// Normalized frequency in `[0, 1)`.
    pub frequency: f64,
    /// Nonnegative power.
    pub power: f64,
}

/// Result of [`vandermonde_retrieve`].
#[derive(Debug, Clone)]
pub struct VandermondeDecomposition {
    /// Components sorted by frequency.
    pub components: Vec<SpectralComponent>,
    /// `|sum_i p_i a(f_i) a(f_i)^H - T|_F / |T|_F`.
    pub relative_error: f64,
    /// Set when the signal/noise eigenvalue split is not unique (flat or
    /// near-flat spectrum); the frequencies are then arbitrary.
    pub ambiguous: bool,
    /// Set when the numerical rank fell below the requested count; fewer
    /// components are returned.
    pub rank_deficient: bool,
}

/// Decomposes `expand(u) ~= sum_i p_i a(f_i) a(f_i)^H` using the shift
/// invariance of the signal subspace (ESPRIT); powers come from a least
/// squares fit clipped to be nonnegative.
///
/// Diagnostic only: `rank` is normally the known path count.
pub fn vandermonde_retrieve(
    u: &OneLevelLagVector,
    rank: usize,
) -> Result<VandermondeDecomposition, ToeplitzError> {
    let k = u.side();
    if rank == 0 || rank > k - 1 {
        return Err(ToeplitzError::InvalidRank { rank, max: k - 1 });
    }
    let t = expand_one_level(u);
    let eig = linalg::hermitian_eig(t.as_mat())?;
    let lam_max = eig.values.last().copied().unwrap_or(0.0);
    if eig.values[0] < -1e-8 * lam_max.max(1.0) {
        return Err(ToeplitzError::NotPsd {
            min_eig: eig.values[0],
        });
    }

    // numerical rank: eigenvalues above a relative floor, counted from the top
    let floor = 1e-10 * lam_max.max(f64::MIN_POSITIVE);
    let numerical_rank = eig.values.iter().filter(|&&v| v > floor).count();
    let rank_deficient = numerical_rank < rank;
    let r = rank.min(numerical_rank).max(0);
    if r == 0 {
        return Ok(VandermondeDecomposition {
            components: vec![],
            relative_error: 1.0,
            ambiguous: true,
            rank_deficient: true,
        });
    }
    // the split is ambiguous when the gap between the smallest kept
    // eigenvalue and the largest discarded one (nearly) vanishes
    let kept_min = eig.values[k - r];
    let dropped_max = if r < k { eig.values[k - r - 1] } else { 0.0 };
    let ambiguous = (kept_min - dropped_max).abs() <= 1e-8 * lam_max.max(1.0);

    // signal subspace: eigenvectors of the r largest eigenvalues
    let us = Mat::from_fn(k, r, |i, j| eig.vectors[(i, k - r + j)]);
    // shift invariance: rows 0..k-1 map to rows 1..k through Psi
    let upper = us.as_ref().submatrix(0, 0, k - 1, r).to_owned();
    let lower = us.as_ref().submatrix(1, 0, k - 1, r).to_owned();
    let psi = solve_least_squares(&upper, &lower);
    let freqs: Vec<f64> = complex_eigenvalues(&psi)
        .into_iter()
        .map(|z| {
            let f = -z.arg() / std::f64::consts::TAU;
            f.rem_euclid(1.0)
        })
        .collect();

    let powers = fit_powers(t.as_mat(), &freqs);
    let mut components: Vec<SpectralComponent> = freqs
        .into_iter()
        .zip(powers)
        .map(|(frequency, power)| SpectralComponent { frequency, power })
        .collect();
    components.sort_by(|a, b| a.frequency.partial_cmp(&b.frequency).unwrap());

    let mut approx = Mat::<Complex64>::zeros(k, k);
    for comp in &components {
        let a = crate::channel::steering_vector(k, comp.frequency);
        approx += linalg::scaled_outer(&a, comp.power);
    }
    let t_norm = t.as_mat().norm_l2().max(f64::MIN_POSITIVE);
    let relative_error = (&approx - t.as_mat()).norm_l2() / t_norm;

    Ok(VandermondeDecomposition {
        components,
        relative_error,
        ambiguous,
        rank_deficient,
    })
}

/// Least squares `argmin_X |A X - B|_F` via QR.
fn solve_least_squares(a: &Mat<Complex64>, b: &Mat<Complex64>) -> Mat<Complex64> {
    let qr = a.col_piv_qr();
    qr.solve_lstsq(b)
}

/// Eigenvalues of a small general complex matrix.
fn complex_eigenvalues(m: &Mat<Complex64>) -> Vec<Complex64> {
    m.eigenvalues().expect("small dense eigenvalue problem converges")
}

/// Nonnegative least-squares fit of powers for fixed frequencies.
fn fit_powers(t: &Mat<Complex64>, freqs: &[f64]) -> Vec<f64> {
    let k = t.nrows();
    let r = freqs.len();
    let atoms: Vec<Vec<Complex64>> = freqs
        .iter()
        .map(|&f| crate::channel::steering_vector(k, f))
        .collect();
    // gram[i][j] = |a_i^H a_j|^2, rhs[i] = a_i^H T a_i  (both real)
    let gram = Mat::from_fn(r, r, |i, j| {
        Complex64::new(linalg::inner(&atoms[i], &atoms[j]).norm_sqr(), 0.0)
    });
    let mut rhs = Mat::<Complex64>::zeros(r, 1);
    for i in 0..r {
        let mut acc = Complex64::default();
        for p in 0..k {
            for q in 0..k {
                acc += atoms[i][p].conj() * t[(p, q)] * atoms[i][q];
            }
        }
        rhs[(i, 0)] = Complex64::new(acc.re, 0.0);
    }
    // ridge for near-coincident frequencies
    let ridge = 1e-10 * gram.norm_max().max(1.0);
    let reg = &gram + Mat::<Complex64>::identity(r, r) * Complex64::new(ridge, 0.0);
    let solved = match reg.llt(Side::Lower) {
        Ok(llt) => {
            let mut x = rhs.clone();
            llt.solve_in_place(x.as_mut());
            x
        }
        Err(_) => solve_least_squares(&reg, &rhs),
    };
    (0..r).map(|i| solved[(i, 0)].re.max(0.0)).collect()
}
