//! Small dense real linear algebra: symmetric eigendecomposition, SVD-based
//! pseudoinverse, null-space projectors, positive/negative matrix parts,
//! definiteness tests and general (nonsymmetric) eigenvalues.
//!
//! Everything here targets tiny matrices (dims ≤ 16), so the solvers favor
//! robustness over asymptotics: cyclic Jacobi for the symmetric problem,
//! one-sided Jacobi (Hestenes) for singular values, and complex shifted-QR
//! on a Hessenberg form for general spectra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative cutoff: singular/eigen values below `tol * max(1, scale)`
/// are treated as zero.
pub const RANK_TOL: f64 = 1e-9;

/// Default relative tolerance for semidefiniteness tests.
pub const EIG_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is not symmetric within tolerance")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("eigenvalue iteration failed to converge")]
    NonConvergence,
    #[error("degenerate polynomial: leading coefficient is zero")]
    DegeneratePolynomial,
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        if data.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Mat::new(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
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

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        self.scale(-1.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[f64]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i];
        }
    }

    /// Horizontal stack of 2x2 blocks into one matrix.
    pub fn from_blocks(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut m = Mat::zeros(rows, cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m[(i, j)] = a[(i, j)];
            }
            for j in 0..b.cols {
                m[(i, a.cols + j)] = b[(i, j)];
            }
        }
        for i in 0..c.rows {
            for j in 0..c.cols {
                m[(a.rows + i, j)] = c[(i, j)];
            }
            for j in 0..d.cols {
                m[(a.rows + i, a.cols + j)] = d[(i, j)];
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Symmetric real matrix. Construction symmetrizes the input after checking
/// the asymmetry is within a 1e-12 relative tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMat(Mat);

impl SymMat {
    pub fn new(m: Mat) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::DimensionMismatch("symmetric matrix must be square".into()));
        }
        let scale = 1.0_f64.max(m.max_abs());
        for i in 0..m.rows() {
            for j in (i + 1)..m.cols() {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(LinalgError::NotSymmetric);
                }
            }
        }
        let mut s = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                s[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
            }
        }
        Ok(Self(s))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        Self::new(Mat::from_rows(rows)?)
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        Self(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self(Mat::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn mat(&self) -> &Mat {
        &self.0
    }

    pub fn into_mat(self) -> Mat {
        self.0
    }
}

impl std::ops::Index<(usize, usize)> for SymMat {
    type Output = f64;
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

/// Eigendecomposition of a symmetric matrix: `U diag(λ) Uᵀ` with eigenvalues
/// sorted in descending order and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Mat,
}

impl SpectralDecomp {
    pub fn reconstruct(&self) -> Mat {
        let n = self.eigenvalues.len();
        let mut d = Mat::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = self.eigenvalues[i];
        }
        self.eigenvectors.matmul(&d).matmul(&self.eigenvectors.transpose())
    }
}

/// Sign classification of a symmetric matrix by its eigenvalues.
///
/// The zero matrix gets its own variant since it is both positive and
/// negative semidefinite; callers that only care about one-sided tests
/// should use [`Definiteness::is_psd`] / [`Definiteness::is_nsd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemi,
    Indefinite,
    NegativeSemi,
    NegativeDefinite,
    Zero,
}

impl Definiteness {
    pub fn is_psd(self) -> bool {
        matches!(self, Self::PositiveDefinite | Self::PositiveSemi | Self::Zero)
    }

    pub fn is_nsd(self) -> bool {
        matches!(self, Self::NegativeDefinite | Self::NegativeSemi | Self::Zero)
    }

    pub fn is_pd(self) -> bool {
        matches!(self, Self::PositiveDefinite)
    }

    pub fn is_nd(self) -> bool {
        matches!(self, Self::NegativeDefinite)
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eig(m: &SymMat) -> SpectralDecomp {
    let n = m.dim();
    let mut a = m.mat().clone();
    let mut u = Mat::identity(n);
    if n > 1 {
        let scale = 1.0_f64.max(a.max_abs());
        for _sweep in 0..64 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    // A <- Jᵀ A J applied to rows/cols p, q
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let ukp = u[(k, p)];
                        let ukq = u[(k, q)];
                        u[(k, p)] = c * ukp - s * ukq;
                        u[(k, q)] = s * ukp + c * ukq;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = Mat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &u.column(src));
    }
    SpectralDecomp { eigenvalues, eigenvectors }
}

/// Thin SVD `M = U diag(σ) Vᵀ` with σ sorted descending; computed by
/// one-sided Jacobi so tiny singular values stay accurate.
pub struct Svd {
    pub u: Mat,
    pub sigma: Vec<f64>,
    pub v: Mat,
}

pub fn svd(m: &Mat) -> Svd {
    if m.rows() < m.cols() {
        let t = svd(&m.transpose());
        return Svd { u: t.v, sigma: t.sigma, v: t.u };
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut v = Mat::identity(cols);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..rows {
                    alpha += a[(i, p)] * a[(i, p)];
                    beta += a[(i, q)] * a[(i, q)];
                    gamma += a[(i, p)] * a[(i, q)];
                }
                if gamma.abs() <= 1e-30 || gamma.abs() <= 1e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip - s * aiq;
                    a[(i, q)] = s * aip + c * aiq;
                }
                for i in 0..cols {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = c * vip - s * viq;
                    v[(i, q)] = s * vip + c * viq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let mut u = Mat::zeros(rows, cols);
    let mut vs = Mat::zeros(cols, cols);
    let sorted: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    for (dst, &src) in order.iter().enumerate() {
        let col = a.column(src);
        let s = sigma[src];
        if s > 0.0 {
            u.set_column(dst, &col.iter().map(|x| x / s).collect::<Vec<_>>());
        }
        vs.set_column(dst, &v.column(src));
    }
    sigma = sorted;
    Svd { u, sigma, v: vs }
}

/// Moore–Penrose pseudoinverse; singular values below `tol * max(1, σ_max)`
/// are treated as zero.
pub fn pinv(m: &Mat, tol: f64) -> Mat {
    let decomp = svd(m);
    let cut = tol * 1.0_f64.max(decomp.sigma.first().copied().unwrap_or(0.0));
    let mut out = Mat::zeros(m.cols(), m.rows());
    for (k, &s) in decomp.sigma.iter().enumerate() {
        if s <= cut {
            continue;
        }
        let uk = decomp.u.column(k);
        let vk = decomp.v.column(k);
        for i in 0..m.cols() {
            for j in 0..m.rows() {
                out[(i, j)] += vk[i] * uk[j] / s;
            }
        }
    }
    out
}

/// Orthogonal projector `P = I − L L†` onto the null space of `Lᵀ`.
pub fn null_projector(l: &Mat, tol: f64) -> SymMat {
    let li = pinv(l, tol);
    let p = Mat::identity(l.rows()).sub(&l.matmul(&li));
    // exact symmetrization kills roundoff asymmetry from the product
    let mut s = p.clone();
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            s[(i, j)] = 0.5 * (p[(i, j)] + p[(j, i)]);
        }
    }
    SymMat::new(s).expect("projector is symmetric by construction")
}

/// Spectral split `S = S_p + S_n` keeping only eigenvalues above `+band`
/// (positive part) or below `−band` (negative part), with
/// `band = tol * max(1, |λ|_max)`. Eigenvalues inside the band are dropped
/// from both parts.
pub fn pos_neg_parts(s: &SymMat, tol: f64) -> (SymMat, SymMat) {
    let n = s.dim();
    let dec = sym_eig(s);
    let scale = 1.0_f64.max(dec.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    let band = tol * scale;
    let mut pos = Mat::zeros(n, n);
    let mut neg = Mat::zeros(n, n);
    for (k, &lam) in dec.eigenvalues.iter().enumerate() {
        if lam.abs() <= band {
            continue;
        }
        let vk = dec.eigenvectors.column(k);
        let target = if lam > 0.0 { &mut pos } else { &mut neg };
        for i in 0..n {
            for j in 0..n {
                target[(i, j)] += lam * vk[i] * vk[j];
            }
        }
    }
    let sym = |m: Mat| {
        let mut out = m.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
            }
        }
        SymMat::new(out).expect("spectral part is symmetric")
    };
    (sym(pos), sym(neg))
}

/// Classify a symmetric matrix by its extreme eigenvalues against
/// `tol * max(1, |λ|_max)`.
pub fn definiteness(s: &SymMat, tol: f64) -> Definiteness {
    let dec = sym_eig(s);
    let max = dec.eigenvalues.first().copied().unwrap_or(0.0);
    let min = dec.eigenvalues.last().copied().unwrap_or(0.0);
    let band = tol * 1.0_f64.max(max.abs().max(min.abs()));
    if max.abs() <= band && min.abs() <= band {
        Definiteness::Zero
    } else if min > band {
        Definiteness::PositiveDefinite
    } else if min >= -band {
        Definiteness::PositiveSemi
    } else if max < -band {
        Definiteness::NegativeDefinite
    } else if max <= band {
        Definiteness::NegativeSemi
    } else {
        Definiteness::Indefinite
    }
}

/// Range-membership test: `v ∈ R(M)` iff `‖(I − M M†) v‖ ≤ tol (1 + ‖v‖)`.
pub fn in_range(m: &Mat, v: &[f64], tol: f64) -> Result<bool, LinalgError> {
    if v.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector length {} vs {} matrix rows",
            v.len(),
            m.rows()
        )));
    }
    let residual = range_residual(m, v);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(residual <= tol * (1.0 + norm))
}

/// `‖(I − M M†) v‖`, the distance witness used by [`in_range`].
pub fn range_residual(m: &Mat, v: &[f64]) -> f64 {
    let mi = pinv(m, RANK_TOL);
    let proj = m.matvec(&mi.matvec(v));
    v.iter()
        .zip(&proj)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Eigenvalues of a square real matrix (with multiplicity), via Hessenberg
/// reduction followed by shifted QR in complex arithmetic.
pub fn general_eig(m: &Mat) -> Result<Vec<Complex64>, LinalgError> {
    assert!(m.is_square(), "general_eig requires a square matrix");
    let n = m.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![Complex64::new(m[(0, 0)], 0.0)]);
    }
    let mut h: Vec<Vec<Complex64>> = m
        .to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
        .collect();
    hessenberg_in_place(&mut h);
    qr_eigenvalues(&mut h)
}

fn hessenberg_in_place(h: &mut [Vec<Complex64>]) {
    let n = h.len();
    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating column k below the subdiagonal
        let mut x: Vec<Complex64> = (k + 1..n).map(|i| h[i][k]).collect();
        let xnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if xnorm <= 1e-300 {
            continue;
        }
        let alpha = if x[0].norm() > 0.0 {
            -x[0] / x[0].norm() * xnorm
        } else {
            Complex64::new(-xnorm, 0.0)
        };
        x[0] -= alpha;
        let vnorm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vnorm <= 1e-300 {
            continue;
        }
        let v: Vec<Complex64> = x.iter().map(|c| c / vnorm).collect();
        // H <- (I - 2vv^H) H
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += v[i].conj() * h[k + 1 + i][j];
            }
            for i in 0..v.len() {
                let delta = 2.0 * v[i] * dot;
                h[k + 1 + i][j] -= delta;
            }
        }
        // H <- H (I - 2vv^H)
        for row in h.iter_mut() {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += row[k + 1 + i] * v[i];
            }
            for i in 0..v.len() {
                let delta = 2.0 * dot * v[i].conj();
                row[k + 1 + i] -= delta;
            }
        }
    }
}

fn qr_eigenvalues(h: &mut Vec<Vec<Complex64>>) -> Result<Vec<Complex64>, LinalgError> {
    let n = h.len();
    let mut eigs = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n; // active block is rows/cols 0..hi
    let mut iters_since_deflate = 0usize;
    let mut total_iters = 0usize;
    let max_total = 200 * n * n + 400;
    while hi > 0 {
        if hi == 1 {
            eigs[0] = h[0][0];
            break;
        }
        // look for a negligible subdiagonal entry to split the problem
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[lo][lo - 1].norm() <= f64::EPSILON * s {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            eigs[hi - 1] = h[hi - 1][hi - 1];
            hi -= 1;
            iters_since_deflate = 0;
            continue;
        }
        if hi >= 2 && lo == hi - 2 {
            let (e1, e2) = eig2(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
            eigs[hi - 2] = e1;
            eigs[hi - 1] = e2;
            hi -= 2;
            iters_since_deflate = 0;
            continue;
        }
        total_iters += 1;
        iters_since_deflate += 1;
        if total_iters > max_total {
            return Err(LinalgError::NonConvergence);
        }
        // Wilkinson shift from the trailing 2x2 of the active block,
        // with an occasional exceptional shift to break cycles
        let mu = if iters_since_deflate % 12 == 0 {
            h[hi - 1][hi - 1] + Complex64::new(h[hi - 1][hi - 2].norm(), 0.0)
        } else {
            let (e1, e2) = eig2(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
            let t = h[hi - 1][hi - 1];
            if (e1 - t).norm() <= (e2 - t).norm() {
                e1
            } else {
                e2
            }
        };
        // implicit single-shift QR sweep on the active block via Givens
        let mut rotations: Vec<(usize, Complex64, Complex64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            h[i][i] -= mu;
        }
        for i in lo..hi - 1 {
            let a = h[i][i];
            let b = h[i + 1][i];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if r <= 1e-300 {
                rotations.push((i, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
                continue;
            }
            let c = a.conj() / r;
            let s = b.conj() / r;
            for j in i..hi {
                let x = h[i][j];
                let y = h[i + 1][j];
                h[i][j] = c * x + s * y;
                h[i + 1][j] = -s.conj() * x + c.conj() * y;
            }
            rotations.push((i, c, s));
        }
        for &(i, c, s) in &rotations {
            let top = if i + 2 < hi { i + 2 } else { hi - 1 };
            for k in lo..=top {
                let x = h[k][i];
                let y = h[k][i + 1];
                h[k][i] = x * c.conj() + y * s.conj();
                h[k][i + 1] = -x * s + y * c;
            }
        }
        for i in lo..hi {
            h[i][i] += mu;
        }
    }
    // descending by real part then imaginary part for reproducible output
    eigs.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    Ok(eigs)
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    ((tr + disc) / 2.0, (tr - disc) / 2.0)
}

/// Roots of a real polynomial `a0 λ^n + a1 λ^(n-1) + … + an` via the
/// companion matrix. Near-zero leading coefficients are trimmed first.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>, LinalgError> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(LinalgError::DegeneratePolynomial);
    }
    let trimmed: Vec<f64> = {
        let first = coeffs
            .iter()
            .position(|c| c.abs() > 1e-12 * scale)
            .ok_or(LinalgError::DegeneratePolynomial)?;
        coeffs[first..].to_vec()
    };
    let n = trimmed.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let a0 = trimmed[0];
    let mut companion = Mat::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -trimmed[j + 1] / a0;
    }
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    general_eig(&companion)
}
