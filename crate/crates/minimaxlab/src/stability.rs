//! Exact exponential-stability decisions for gradient algorithms: Jacobian
//! spectra, Schur root tests, closed-form per-family stability predicates on
//! the complex plane, stability-region rasters, and cross-validation against
//! brute-force spectral radii of the update maps.

use crate::dynamics::{AlgorithmSpec, Family, UpdateMode};
use crate::linalg::{general_eig, poly_roots, LinalgError, Mat};
use crate::oracle::SmoothGame;
use crate::quadratic::QuadraticGame;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Eigenvalues with a stability margin inside this band are reported as
/// marginal; the criteria are strict inequalities and floating point cannot
/// certify the boundary.
pub const MARGIN_BAND: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("eigenvalue computation failed: {0}")]
    SpectrumFailure(#[from] LinalgError),
    #[error("point does not satisfy the strict second-order minimax conditions")]
    NotStrictMinimax,
    #[error("no stable hyper-parameter cell on the sampled grid")]
    NotFound,
}

/// Jacobian of the two-time-scale vector field
/// `[[−α₁∂²ₓₓf, −α₁∂²ₓᵧf], [α₂∂²ᵧₓf, α₂∂²ᵧᵧf]]` at a point.
#[derive(Debug, Clone)]
pub struct JacobianH {
    pub matrix: Mat,
    pub alpha1: f64,
    pub alpha2: f64,
    pub point: Vec<f64>,
    pub label: String,
}

pub fn jacobian_h(game: &dyn SmoothGame, point: (&[f64], &[f64]), alpha1: f64, alpha2: f64) -> JacobianH {
    let hxx = game.hess_xx(point.0, point.1);
    let hxy = game.hess_xy(point.0, point.1);
    let hyy = game.hess_yy(point.0, point.1);
    let top_left = hxx.scale(-alpha1);
    let top_right = hxy.scale(-alpha1);
    let bottom_left = hxy.transpose().scale(alpha2);
    let bottom_right = hyy.scale(alpha2);
    let matrix = Mat::from_blocks(&top_left, &top_right, &bottom_left, &bottom_right);
    let mut point_vec = point.0.to_vec();
    point_vec.extend_from_slice(point.1);
    JacobianH { matrix, alpha1, alpha2, point: point_vec, label: game.label().to_string() }
}

// ── Schur root tests ────────────────────────────────────────────────

/// Schur's criterion: all roots of the real polynomial
/// `a0 λ^n + … + an` lie strictly inside the unit disk iff every
/// `det(P_k P_kᵀ − Q_kᵀ Q_k)` is positive.
pub fn schur_real(coeffs: &[f64]) -> Result<bool, StabilityError> {
    if coeffs.is_empty() || coeffs[0] == 0.0 {
        return Err(StabilityError::SpectrumFailure(LinalgError::DegeneratePolynomial));
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(true);
    }
    for k in 1..=n {
        let mut p = Mat::zeros(k, k);
        let mut q = Mat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                if i >= j {
                    p[(i, j)] = coeffs[i - j];
                }
                if i <= j {
                    q[(i, j)] = coeffs[n - j + i];
                }
            }
        }
        let m = p.matmul(&p.transpose()).sub(&q.transpose().matmul(&q));
        if det(&m) <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn det(m: &Mat) -> f64 {
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = 1.0;
    let mut out = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if a[(r, col)].abs() > a[(pivot, col)].abs() {
                pivot = r;
            }
        }
        if a[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
            sign = -sign;
        }
        out *= a[(col, col)];
        for r in col + 1..n {
            let f = a[(r, col)] / a[(col, col)];
            for j in col..n {
                a[(r, j)] -= f * a[(col, j)];
            }
        }
    }
    sign * out
}

/// Both roots of the complex quadratic `λ² + aλ + b` lie strictly inside
/// the unit disk iff `|b| < 1` and
/// `(1 − |b|²)² + 2 Re(a² conj(b)) > |a|² (1 + |b|²)`.
pub fn schur_complex_quadratic(a: Complex64, b: Complex64) -> bool {
    let bn = b.norm_sqr();
    if bn >= 1.0 {
        return false;
    }
    (1.0 - bn).powi(2) + 2.0 * (a * a * b.conj()).re > a.norm_sqr() * (1.0 + bn)
}

// ── Per-family stability predicates on the λ-plane ──────────────────

pub fn stable_gda(lambda: Complex64) -> bool {
    (Complex64::new(1.0, 0.0) + lambda).norm() < 1.0
}

pub fn stable_eg(lambda: Complex64, beta: f64) -> bool {
    (Complex64::new(1.0, 0.0) + lambda / beta + lambda * lambda / beta).norm() < 1.0
}

/// EG stability region in the limit of infinitely aggressive extra-gradient
/// steps: `Re(λ + λ²) < 0`.
pub fn stable_eg_limit(lambda: Complex64) -> bool {
    (lambda + lambda * lambda).re < 0.0
}

pub fn stable_ogd(lambda: Complex64, k: f64) -> bool {
    let n2 = lambda.norm_sqr();
    n2 < 1.0 && n2 * (k - 3.0 + (k + 1.0) * n2) < 2.0 * lambda.re * (k * n2 - 1.0)
}

/// OGD stability region as `k → 1⁺`: the unit disk minus the disk
/// `|λ − 1/2| ≤ 1/2`.
pub fn stable_ogd_limit(lambda: Complex64) -> bool {
    lambda.norm() < 1.0 && (lambda - Complex64::new(0.5, 0.0)).norm() > 0.5
}

pub fn stable_hb(lambda: Complex64, beta: f64) -> bool {
    if beta.abs() >= 1.0 {
        return false;
    }
    let (u, v) = (lambda.re, lambda.im);
    (u + beta + 1.0).powi(2) / (beta + 1.0).powi(2) + v * v / (beta - 1.0).powi(2) < 1.0
}

pub fn stable_nag(lambda: Complex64, beta: f64) -> bool {
    let one_plus = Complex64::new(1.0, 0.0) + lambda;
    if beta.abs() * one_plus.norm() >= 1.0 {
        return false;
    }
    let r = 1.0 + 2.0 * beta * (beta * beta - beta - 1.0) * lambda.re
        + beta * beta * lambda.norm_sqr() * (1.0 + 2.0 * beta);
    // |1+λ|⁻² > r, written division-free
    r <= 0.0 || one_plus.norm_sqr() * r < 1.0
}

/// Eigenvalues of the one-step update map associated with a family at a
/// given `λ ∈ Sp(H)`: the roots of its characteristic polynomial.
pub fn update_roots(family: Family, lambda: Complex64, beta: f64, k: f64) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    match family {
        Family::Gda => vec![one + lambda],
        Family::Eg => vec![one + lambda / beta + lambda * lambda / beta],
        Family::Ogd => complex_quadratic_roots(-(one + k * lambda), lambda),
        Family::PastEg => {
            let keff = 1.0 + 1.0 / beta;
            complex_quadratic_roots(-(one + keff * lambda), lambda)
        }
        Family::Hb => complex_quadratic_roots(-(Complex64::new(beta + 1.0, 0.0) + lambda), Complex64::new(beta, 0.0)),
        Family::Nag => complex_quadratic_roots(-((1.0 + beta) * (one + lambda)), beta * (one + lambda)),
    }
}

/// Roots of `w² + a w + b` by the complex quadratic formula.
pub fn complex_quadratic_roots(a: Complex64, b: Complex64) -> Vec<Complex64> {
    let disc = (a * a - 4.0 * b).sqrt();
    vec![(-a + disc) / 2.0, (-a - disc) / 2.0]
}

/// Smallest distance of any update-map eigenvalue modulus from 1;
/// margins below [`MARGIN_BAND`] mean the strict verdict is not certifiable.
pub fn stability_margin(family: Family, lambda: Complex64, beta: f64, k: f64) -> f64 {
    update_roots(family, lambda, beta, k)
        .iter()
        .map(|w| (w.norm() - 1.0).abs())
        .fold(f64::INFINITY, f64::min)
}

pub fn predicate_for(spec: &AlgorithmSpec, lambda: Complex64) -> bool {
    match spec.family {
        Family::Gda => stable_gda(lambda),
        Family::Eg => stable_eg(lambda, spec.beta),
        Family::Ogd => stable_ogd(lambda, spec.k),
        Family::PastEg => stable_ogd(lambda, 1.0 + 1.0 / spec.beta),
        Family::Hb => stable_hb(lambda, spec.beta),
        Family::Nag => stable_nag(lambda, spec.beta),
    }
}

// ── Exponential stability of an algorithm at a point ────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictMethod {
    Predicate,
    AugmentedJacobian,
    Both,
}

#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    /// Spectrum of the two-time-scale Jacobian `H_{α₁,α₂}`.
    pub eigenvalues: Vec<Complex64>,
    pub per_eigenvalue_pass: Vec<bool>,
    pub stable: bool,
    pub spectral_radius_of_update: f64,
    pub method: VerdictMethod,
    pub agreement: bool,
    pub marginal_flags: Vec<bool>,
    /// Set when the point failed the stationarity check.
    pub stationary_warning: bool,
}

impl StabilityVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "eigenvalues": self.eigenvalues.iter().map(|l| vec![l.re, l.im]).collect::<Vec<_>>(),
            "per_eigenvalue_pass": self.per_eigenvalue_pass,
            "stable": self.stable,
            "spectral_radius_of_update": self.spectral_radius_of_update,
            "method": match self.method {
                VerdictMethod::Predicate => "predicate",
                VerdictMethod::AugmentedJacobian => "augmented_jacobian",
                VerdictMethod::Both => "both",
            },
            "agreement": self.agreement,
            "marginal_flags": self.marginal_flags,
            "stationary_warning": self.stationary_warning,
        })
    }
}

/// Decide exponential stability of `spec` at `point`: the closed-form
/// predicate applied to `Sp(H)` and, independently, the spectral radius of
/// the augmented update Jacobian (or the alternating characteristic roots).
pub fn exponential_stability(
    spec: &AlgorithmSpec,
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
) -> Result<StabilityVerdict, StabilityError> {
    let jac = jacobian_h(game, point, spec.alpha1, spec.alpha2);
    let eigenvalues = general_eig(&jac.matrix)?;
    let gx = game.grad_x(point.0, point.1);
    let gy = game.grad_y(point.0, point.1);
    let grad_norm = gx.iter().chain(&gy).map(|g| g * g).sum::<f64>().sqrt();
    let stationary_warning = grad_norm > 1e-7;

    if spec.update_mode == UpdateMode::Alternating {
        let roots = alternating_update_roots(spec, game, point)?;
        let stable = roots.iter().all(|w| w.norm() < 1.0);
        let radius = roots.iter().map(|w| w.norm()).fold(0.0, f64::max);
        let marginal_flags = eigenvalues.iter().map(|_| (radius - 1.0).abs() < MARGIN_BAND).collect();
        return Ok(StabilityVerdict {
            eigenvalues,
            per_eigenvalue_pass: vec![],
            stable,
            spectral_radius_of_update: radius,
            method: VerdictMethod::AugmentedJacobian,
            agreement: true,
            marginal_flags,
            stationary_warning,
        });
    }

    let per_eigenvalue_pass: Vec<bool> =
        eigenvalues.iter().map(|&l| predicate_for(spec, l)).collect();
    let marginal_flags: Vec<bool> = eigenvalues
        .iter()
        .map(|&l| stability_margin(spec.family, l, spec.beta, spec.k) < MARGIN_BAND)
        .collect();
    let stable = per_eigenvalue_pass.iter().all(|&p| p);
    let update = augmented_update_jacobian(spec, &jac.matrix);
    let radius = general_eig(&update)?
        .iter()
        .map(|w| w.norm())
        .fold(0.0, f64::max);
    let agreement = stable == (radius < 1.0) || (radius - 1.0).abs() < MARGIN_BAND;
    Ok(StabilityVerdict {
        eigenvalues,
        per_eigenvalue_pass,
        stable,
        spectral_radius_of_update: radius,
        method: VerdictMethod::Both,
        agreement,
        marginal_flags,
        stationary_warning,
    })
}

/// State-space Jacobian of the one-step (or state-doubled two-step) update.
pub fn augmented_update_jacobian(spec: &AlgorithmSpec, h: &Mat) -> Mat {
    let d = h.rows();
    let eye = Mat::identity(d);
    let zero = Mat::zeros(d, d);
    match spec.family {
        Family::Gda => eye.add(h),
        Family::Eg => eye.add(&h.add(&h.matmul(h)).scale(1.0 / spec.beta)),
        Family::Ogd => {
            let top_left = eye.add(&h.scale(spec.k));
            Mat::from_blocks(&top_left, &h.neg(), &eye, &zero)
        }
        Family::Hb => {
            let top_left = eye.scale(1.0 + spec.beta).add(h);
            Mat::from_blocks(&top_left, &eye.scale(-spec.beta), &eye, &zero)
        }
        Family::Nag => {
            let base = eye.add(h);
            Mat::from_blocks(&base.scale(1.0 + spec.beta), &base.scale(-spec.beta), &eye, &zero)
        }
        Family::PastEg => {
            let top_left = eye.add(&h.scale(1.0 / spec.beta));
            let top_right = h.matmul(h).scale(1.0 / spec.beta);
            Mat::from_blocks(&top_left, &top_right, &eye, h)
        }
    }
}

/// Roots of the alternating-update characteristic determinant
/// (the λ-shifted block determinant rather than an augmented matrix).
pub fn alternating_update_roots(
    spec: &AlgorithmSpec,
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
) -> Result<Vec<Complex64>, StabilityError> {
    let a = game.hess_xx(point.0, point.1);
    let b = game.hess_yy(point.0, point.1);
    let c = game.hess_xy(point.0, point.1);
    let n = game.nx();
    let m = game.ny();
    let dim = n + m;
    let degree = match spec.family {
        Family::Gda => dim,
        Family::Ogd => 2 * dim,
        _ => return Err(StabilityError::SpectrumFailure(LinalgError::DimensionMismatch(
            "alternating mode is defined for GDA and OGD".into(),
        ))),
    };
    // block matrix M(λ) = [[−α₁A, −α₁C], [α₂λCᵀ, α₂B]]
    let m_of = |lambda: Complex64| -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = Complex64::new(-spec.alpha1 * a[(i, j)], 0.0);
            }
            for j in 0..m {
                out[i][n + j] = Complex64::new(-spec.alpha1 * c[(i, j)], 0.0);
            }
        }
        for i in 0..m {
            for j in 0..n {
                out[n + i][j] = lambda * spec.alpha2 * c[(j, i)];
            }
            for j in 0..m {
                out[n + i][n + j] = Complex64::new(spec.alpha2 * b[(i, j)], 0.0);
            }
        }
        out
    };
    let char_value = |lambda: Complex64| -> Complex64 {
        let mm = m_of(lambda);
        let mut shifted = mm;
        match spec.family {
            Family::Gda => {
                // det((λ−1)I − M(λ))
                for (i, row) in shifted.iter_mut().enumerate() {
                    for (j, entry) in row.iter_mut().enumerate() {
                        *entry = if i == j {
                            lambda - Complex64::new(1.0, 0.0) - *entry
                        } else {
                            -*entry
                        };
                    }
                }
                cdet(shifted)
            }
            Family::Ogd => {
                // det((λ−1)λ I − (kλ−1) M(λ))
                let scale = spec.k * lambda - Complex64::new(1.0, 0.0);
                for (i, row) in shifted.iter_mut().enumerate() {
                    for (j, entry) in row.iter_mut().enumerate() {
                        *entry = if i == j {
                            (lambda - Complex64::new(1.0, 0.0)) * lambda - scale * *entry
                        } else {
                            -scale * *entry
                        };
                    }
                }
                cdet(shifted)
            }
            _ => unreachable!(),
        }
    };
    // recover the polynomial coefficients by interpolation at roots of unity
    let count = degree + 1;
    let values: Vec<Complex64> = (0..count)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            char_value(Complex64::from_polar(1.0, th))
        })
        .collect();
    let mut ascending = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let th = -2.0 * std::f64::consts::PI * (j * k) as f64 / count as f64;
            acc += v * Complex64::from_polar(1.0, th);
        }
        ascending.push(acc / count as f64);
    }
    let coeffs: Vec<f64> = ascending.iter().rev().map(|c| c.re).collect();
    Ok(poly_roots(&coeffs)?)
}

fn cdet(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut out = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if a[r][col].norm() > a[pivot][col].norm() {
                pivot = r;
            }
        }
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            out = -out;
        }
        out *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for j in col..n {
                let delta = f * a[col][j];
                a[r][j] -= delta;
            }
        }
    }
    out
}

// ── Region rasters ──────────────────────────────────────────────────

/// Family selector for λ-plane rasters, including the closed-form limit
/// regions so tests never rely on huge finite parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionAlgo {
    Gda,
    Eg { beta: f64 },
    EgLimit,
    Ogd { k: f64 },
    OgdLimit,
    Hb { beta: f64 },
    Nag { beta: f64 },
}

impl RegionAlgo {
    pub fn stable(&self, lambda: Complex64) -> bool {
        match *self {
            RegionAlgo::Gda => stable_gda(lambda),
            RegionAlgo::Eg { beta } => stable_eg(lambda, beta),
            RegionAlgo::EgLimit => stable_eg_limit(lambda),
            RegionAlgo::Ogd { k } => stable_ogd(lambda, k),
            RegionAlgo::OgdLimit => stable_ogd_limit(lambda),
            RegionAlgo::Hb { beta } => stable_hb(lambda, beta),
            RegionAlgo::Nag { beta } => stable_nag(lambda, beta),
        }
    }

    /// Distance proxy from the stability boundary, for margin-band masking.
    pub fn margin(&self, lambda: Complex64) -> f64 {
        match *self {
            RegionAlgo::Gda => ((Complex64::new(1.0, 0.0) + lambda).norm() - 1.0).abs(),
            RegionAlgo::Eg { beta } => {
                ((Complex64::new(1.0, 0.0) + lambda / beta + lambda * lambda / beta).norm() - 1.0).abs()
            }
            RegionAlgo::EgLimit => (lambda + lambda * lambda).re.abs(),
            RegionAlgo::Ogd { k } => stability_margin(Family::Ogd, lambda, 0.0, k),
            RegionAlgo::OgdLimit => {
                let a = (lambda.norm() - 1.0).abs();
                let b = ((lambda - Complex64::new(0.5, 0.0)).norm() - 0.5).abs();
                a.min(b)
            }
            RegionAlgo::Hb { beta } => stability_margin(Family::Hb, lambda, beta, 0.0),
            RegionAlgo::Nag { beta } => stability_margin(Family::Nag, lambda, beta, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn figure_default() -> Self {
        Self { re_min: -2.5, re_max: 0.5, im_min: -1.5, im_max: 1.5 }
    }
}

#[derive(Debug, Clone)]
pub struct RasterGrid {
    pub window: Window,
    pub res_re: usize,
    pub res_im: usize,
    /// Row-major over the imaginary axis (outer) then real axis (inner).
    pub stable: Vec<bool>,
}

impl RasterGrid {
    pub fn lambda_at(&self, i_re: usize, i_im: usize) -> Complex64 {
        let re = self.window.re_min
            + (self.window.re_max - self.window.re_min) * i_re as f64 / (self.res_re - 1) as f64;
        let im = self.window.im_min
            + (self.window.im_max - self.window.im_min) * i_im as f64 / (self.res_im - 1) as f64;
        Complex64::new(re, im)
    }

    pub fn at(&self, i_re: usize, i_im: usize) -> bool {
        self.stable[i_im * self.res_re + i_re]
    }
}

/// Rasterize the stability predicate over a λ-plane window, parallelized by
/// rows of the grid.
pub fn region_raster(algo: RegionAlgo, window: Window, res_re: usize, res_im: usize, threads: usize) -> RasterGrid {
    assert!(res_re >= 2 && res_im >= 2, "raster needs at least 2 samples per axis");
    let mut stable = vec![false; res_re * res_im];
    let workers = threads.max(1);
    let rows_per = res_im.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, chunk) in stable.chunks_mut(rows_per * res_re).enumerate() {
            let first_row = w * rows_per;
            scope.spawn(move || {
                for (offset, val) in chunk.iter_mut().enumerate() {
                    let i_im = first_row + offset / res_re;
                    let i_re = offset % res_re;
                    let re = window.re_min
                        + (window.re_max - window.re_min) * i_re as f64 / (res_re - 1) as f64;
                    let im = window.im_min
                        + (window.im_max - window.im_min) * i_im as f64 / (res_im - 1) as f64;
                    *val = algo.stable(Complex64::new(re, im));
                }
            });
        }
    });
    RasterGrid { window, res_re, res_im, stable }
}

/// Over random λ samples, check the region nesting claimed by the
/// aggressive-extra-gradient theorem: for EG, stability at the smaller β
/// implies stability at the larger; for OGD, stability at the larger k
/// implies stability at the smaller. Returns false on any counterexample
/// outside the margin band.
pub fn nesting_check(
    family: Family,
    param_pairs: &[(f64, f64)],
    sample_count: usize,
    window: Window,
    seed: u64,
) -> bool {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let l = Complex64::new(
            rng.gen_range(window.re_min..window.re_max),
            rng.gen_range(window.im_min..window.im_max),
        );
        for &(larger, smaller) in param_pairs {
            match family {
                Family::Eg => {
                    if stability_margin(Family::Eg, l, smaller, 0.0) < MARGIN_BAND
                        || stability_margin(Family::Eg, l, larger, 0.0) < MARGIN_BAND
                    {
                        continue;
                    }
                    if stable_eg(l, smaller) && !stable_eg(l, larger) {
                        return false;
                    }
                }
                Family::Ogd => {
                    if stability_margin(Family::Ogd, l, 0.0, smaller) < MARGIN_BAND
                        || stability_margin(Family::Ogd, l, 0.0, larger) < MARGIN_BAND
                    {
                        continue;
                    }
                    if stable_ogd(l, larger) && !stable_ogd(l, smaller) {
                        return false;
                    }
                }
                _ => return false,
            }
        }
    }
    true
}

// ── Spectra at optimal points, and the two lemma constructors ───────

#[derive(Debug, Clone, Serialize)]
pub struct SaddleSpectrumReport {
    pub eigenvalues_reim: Vec<(f64, f64)>,
    pub max_real_part: f64,
}

/// Spectrum of `H_{α₁,α₂}` at a point; at local saddle points every
/// eigenvalue satisfies `Re(λ) ≤ 0` (with equality for bilinear payoffs).
pub fn saddle_spectrum_check(
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
    alpha1: f64,
    alpha2: f64,
) -> Result<SaddleSpectrumReport, StabilityError> {
    let jac = jacobian_h(game, point, alpha1, alpha2);
    let eigs = general_eig(&jac.matrix)?;
    let max_real_part = eigs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(SaddleSpectrumReport {
        eigenvalues_reim: eigs.iter().map(|l| (l.re, l.im)).collect(),
        max_real_part,
    })
}

/// A 1+1 quadratic game with a local saddle at the origin whose
/// `H_{1,γ}` spectrum is `{z, conj(z)}`; requires `Re(z) ≤ 0`.
pub fn saddle_game_for_target(z: Complex64, gamma: f64) -> Result<QuadraticGame, StabilityError> {
    if z.re > 0.0 {
        return Err(StabilityError::NotFound);
    }
    let u = -z.re;
    let v = z.im;
    Ok(QuadraticGame::one_dim(u, -u / gamma, v / gamma.sqrt()))
}

/// A 1+1 quadratic game with a local minimax point at the origin whose
/// `H_{α₁,α₂}` spectrum is `{z, conj(z)}`; works for arbitrary complex z.
pub fn minimax_game_for_target(z: Complex64, alpha1: f64, alpha2: f64) -> QuadraticGame {
    let u = z.re;
    let v = z.im;
    let b = -1.0;
    let a = -(2.0 * u + alpha2) / alpha1;
    let c = (((u + alpha2).powi(2) + v * v) / (alpha1 * alpha2)).sqrt();
    QuadraticGame::one_dim(a, b, c)
}

/// Grid search for a two-time-scale regime stabilizing EG(β=1) and OGD(k=2)
/// at a strict local minimax point: the smallest γ₀ and largest α₀ such
/// that every sampled `γ > γ₀`, `α₂ < α₀` (with `α₁ = α₂/γ`) is stable for
/// both algorithms.
pub fn strict_minimax_two_timescale_search(
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
    gamma_grid: &[f64],
    alpha_grid: &[f64],
) -> Result<(f64, f64), StabilityError> {
    use crate::optimality::{second_order_invertible, SecondOrderVerdict};
    let report = second_order_invertible(game, point, crate::linalg::EIG_TOL)
        .map_err(|_| StabilityError::NotStrictMinimax)?;
    if report.verdict != SecondOrderVerdict::SufficientStrictLocalMinimax {
        return Err(StabilityError::NotStrictMinimax);
    }
    let cell_stable = |gamma: f64, alpha2: f64| -> Result<bool, StabilityError> {
        let alpha1 = alpha2 / gamma;
        let eg = AlgorithmSpec::eg(alpha1, alpha2, 1.0).expect("beta = 1");
        let ogd = AlgorithmSpec::ogd(2.0, alpha1, alpha2).expect("k = 2");
        Ok(exponential_stability(&eg, game, point)?.stable
            && exponential_stability(&ogd, game, point)?.stable)
    };
    let mut gammas = gamma_grid.to_vec();
    gammas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut alphas = alpha_grid.to_vec();
    alphas.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for &gamma0 in &gammas {
        for &alpha0 in &alphas {
            let mut any = false;
            let mut all = true;
            'cells: for &g in gammas.iter().filter(|&&g| g > gamma0) {
                for &a in alphas.iter().filter(|&&a| a < alpha0) {
                    any = true;
                    if !cell_stable(g, a)? {
                        all = false;
                        break 'cells;
                    }
                }
            }
            if any && all {
                return Ok((gamma0, alpha0));
            }
        }
    }
    Err(StabilityError::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::linalg::EIG_TOL;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jacobian_examples() {
        let nls = fixture("no_local_saddle").unwrap();
        let j = jacobian_h(nls.oracle.as_ref(), (&[0.0], &[0.0]), 1.0, 3.0);
        assert_eq!(j.matrix.to_rows(), vec![vec![2.0, -1.0], vec![3.0, 0.0]]);

        let bl = fixture("bilinear").unwrap();
        let j = jacobian_h(bl.oracle.as_ref(), (&[0.0], &[0.0]), 0.5, 2.0);
        assert_eq!(j.matrix.to_rows(), vec![vec![0.0, -0.5], vec![2.0, 0.0]]);
        let eigs = general_eig(&j.matrix).unwrap();
        for l in eigs {
            assert!(l.re.abs() < 1e-12, "bilinear spectrum is imaginary");
        }

        let zero = crate::quadratic::QuadraticGame::one_dim(0.0, 0.0, 0.0);
        let j = jacobian_h(&zero, (&[0.0], &[0.0]), 1.0, 1.0);
        assert_eq!(j.matrix.max_abs(), 0.0);
    }

    #[test]
    fn schur_real_examples() {
        assert!(schur_real(&[1.0, -1.0, 0.25]).unwrap(), "roots 0.5, 0.5");
        assert!(!schur_real(&[1.0, -2.5, 1.0]).unwrap(), "roots 0.5, 2");
        assert!(schur_real(&[1.0, 0.0]).unwrap(), "root at the origin");
        assert!(schur_real(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn schur_real_matches_root_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 300 {
            let deg = rng.gen_range(1..=4);
            let mut coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.5..1.5)).collect();
            if coeffs[0].abs() < 0.1 {
                coeffs[0] = 1.0;
            }
            let roots = poly_roots(&coeffs).unwrap();
            let margin = roots.iter().map(|r| (r.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min);
            if margin < MARGIN_BAND {
                continue;
            }
            let expected = roots.iter().all(|r| r.norm() < 1.0);
            assert_eq!(schur_real(&coeffs).unwrap(), expected, "coeffs {coeffs:?}");
            checked += 1;
        }
    }

    #[test]
    fn schur_complex_quadratic_examples() {
        assert!(schur_complex_quadratic(c(0.0, 0.0), c(0.0, 0.0)));
        assert!(schur_complex_quadratic(c(-1.0, 0.0), c(0.25, 0.0)), "roots 0.5, 0.5");
        assert!(!schur_complex_quadratic(c(-2.5, 0.0), c(1.0, 0.0)), "|b| = 1 violates strictness");
    }

    #[test]
    fn gda_predicate_examples() {
        assert!(stable_gda(c(-1.0, 0.0)));
        assert!(!stable_gda(c(0.0, 0.5)));
        assert!(!stable_gda(c(0.0, 0.0)), "boundary is excluded");
    }

    #[test]
    fn eg_predicate_examples() {
        assert!(stable_eg(c(-0.5, 0.0), 1.0), "|1 - 0.5 + 0.25| = 0.75");
        assert!(stable_eg(c(0.0, 0.5), 1.0), "|0.75 + 0.5i| ≈ 0.901");
        assert!(!stable_eg(c(1.0, 1.0), 1.0), "|2 + 3i| > 1");
    }

    #[test]
    fn ogd_predicate_examples() {
        assert!(stable_ogd(c(-0.5, 0.0), 1.0001));
        assert!(!stable_ogd(c(0.3, 0.0), 1.0001), "|0.3 - 0.5| < 0.5");
        assert!(!stable_ogd(c(0.0, 0.1), 3.0), "k ≥ 3 never converges on bilinear spectra");
        assert!(stable_ogd_limit(c(-0.5, 0.0)));
        assert!(!stable_ogd_limit(c(0.3, 0.0)));
    }

    #[test]
    fn hb_predicate_examples() {
        assert!(stable_hb(c(-1.0, 0.0), 0.0), "β = 0 reduces to GDA");
        assert!(stable_hb(c(-1.0, 0.0), 0.5));
        assert!(!stable_hb(c(-0.5, 0.0), 1.0), "|β| ≥ 1 is always unstable");
        assert!(!stable_hb(c(-0.5, 0.0), -1.2));
    }

    #[test]
    fn nag_predicate_examples() {
        for &b in &[0.0, 0.3, -0.4, 0.9] {
            assert!(!stable_nag(c(0.0, 0.3), b), "Re(λ) ≥ 0 is never NAG-stable");
            assert!(!stable_nag(c(0.5, -0.2), b));
        }
        assert!(stable_nag(c(-0.5, 0.0), 0.0), "β = 0 reduces to GDA");
    }

    #[test]
    fn predicates_match_update_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut counted = [0usize; 5];
        while counted.iter().any(|&c| c < 800) {
            let l = c(rng.gen_range(-2.5..0.8), rng.gen_range(-1.5..1.5));
            let specs = [
                (0, AlgorithmSpec::gda(1.0, 1.0)),
                (1, AlgorithmSpec::hb(1.0, 1.0, rng.gen_range(-0.95..0.95))),
                (2, AlgorithmSpec::nag(1.0, 1.0, rng.gen_range(-0.95..0.95))),
                (3, AlgorithmSpec::eg(1.0, 1.0, rng.gen_range(0.5..6.0)).unwrap()),
                (4, AlgorithmSpec::ogd(rng.gen_range(1.001..3.5), 1.0, 1.0).unwrap()),
            ];
            for (idx, spec) in specs {
                let margin = stability_margin(spec.family, l, spec.beta, spec.k);
                if margin < MARGIN_BAND {
                    continue;
                }
                let via_roots = update_roots(spec.family, l, spec.beta, spec.k)
                    .iter()
                    .all(|w| w.norm() < 1.0);
                assert_eq!(
                    predicate_for(&spec, l),
                    via_roots,
                    "family {:?} at λ = {l} (β={}, k={})",
                    spec.family,
                    spec.beta,
                    spec.k
                );
                counted[idx] += 1;
            }
        }
    }

    #[test]
    fn saddle_spectrum_left_half_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..200 {
            // A ⪰ 0 ⪰ B gives a local saddle at the origin
            let a = rng.gen_range(0.0..2.0);
            let b = -rng.gen_range(0.0..2.0);
            let cc = rng.gen_range(-2.0..2.0);
            let g = crate::quadratic::QuadraticGame::one_dim(a, b, cc);
            let rep = saddle_spectrum_check(&g, (&[0.0], &[0.0]), rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)).unwrap();
            assert!(rep.max_real_part <= 1e-9, "max Re = {}", rep.max_real_part);
        }
    }

    #[test]
    fn saddle_constructor_hits_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..50 {
            let z = c(-rng.gen_range(0.0..2.0), rng.gen_range(-2.0..2.0));
            let gamma = rng.gen_range(0.2..4.0);
            let g = saddle_game_for_target(z, gamma).unwrap();
            let jac = jacobian_h(&g, (&[0.0], &[0.0]), 1.0, gamma);
            let eigs = general_eig(&jac.matrix).unwrap();
            let hit = eigs.iter().any(|l| (l - z).norm() < 1e-9);
            assert!(hit, "target {z} not in spectrum {eigs:?}");
            let report = g.classify(EIG_TOL);
            assert!(report.saddle.exists, "constructed game must have a saddle");
        }
    }

    #[test]
    fn minimax_constructor_hits_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..50 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let a1 = rng.gen_range(0.1..2.0);
            let a2 = rng.gen_range(0.1..2.0);
            let g = minimax_game_for_target(z, a1, a2);
            let jac = jacobian_h(&g, (&[0.0], &[0.0]), a1, a2);
            let eigs = general_eig(&jac.matrix).unwrap();
            let hit = eigs.iter().any(|l| (l - z).norm() < 1e-9);
            assert!(hit, "target {z} not in spectrum {eigs:?}");
            let report = g.classify(EIG_TOL);
            assert!(report.local_minimax.exists, "constructed game must be local minimax");
            assert!(report.local_minimax.set.contains(&[0.0, 0.0], 1e-9));
        }
    }

    #[test]
    fn exponential_stability_fixture_examples() {
        let nls = fixture("no_local_saddle").unwrap();
        // GDA is unstable for every step-size choice
        for &(a1, a2) in &[(0.1, 0.1), (0.01, 1.0), (1.0, 0.01), (0.5, 2.0)] {
            let v = exponential_stability(&AlgorithmSpec::gda(a1, a2), nls.oracle.as_ref(), (&[0.0], &[0.0])).unwrap();
            assert!(!v.stable, "GDA({a1},{a2}) cannot be stable here");
            assert!(v.agreement);
        }
        // the aggressive-extra-gradient regime is stable once α₂ > 1 + 2α₁
        let eg = AlgorithmSpec::eg(0.1, 1.5, 1e6).unwrap();
        let v = exponential_stability(&eg, nls.oracle.as_ref(), (&[0.0], &[0.0])).unwrap();
        assert!(v.stable);
        // two-time-scale OGD with k near 1
        let ogd = AlgorithmSpec::ogd(1.01, 0.1, 2.0).unwrap();
        let v = exponential_stability(&ogd, nls.oracle.as_ref(), (&[0.0], &[0.0])).unwrap();
        assert!(v.stable);
        assert!(v.spectral_radius_of_update < 1.0);
        assert!(v.agreement);
        // equal step sizes break EG/OGD
        let eg = AlgorithmSpec::eg(0.1, 0.1, 1.0).unwrap();
        assert!(!exponential_stability(&eg, nls.oracle.as_ref(), (&[0.0], &[0.0])).unwrap().stable);
    }

    #[test]
    fn alternating_gda_char_poly_matches_hand_expansion() {
        let nls = fixture("no_local_saddle").unwrap();
        for &(a1, a2) in &[(0.1, 0.5), (0.3, 1.2), (0.05, 2.0)] {
            let spec = AlgorithmSpec::gda(a1, a2).alternating().unwrap();
            let roots = alternating_update_roots(&spec, nls.oracle.as_ref(), (&[0.0], &[0.0])).unwrap();
            // λ² + (α₁α₂ − 2α₁ − 2)λ + (2α₁ + 1) = 0
            let expected = poly_roots(&[1.0, a1 * a2 - 2.0 * a1 - 2.0, 2.0 * a1 + 1.0]).unwrap();
            for r in &roots {
                assert!(
                    expected.iter().any(|e| (e - r).norm() < 1e-8),
                    "root {r} missing from {expected:?}"
                );
            }
            let v = exponential_stability(&spec, nls.oracle.as_ref(), (&[0.0], &[0.0])).unwrap();
            assert!(!v.stable, "alternating GDA requires 2α₁ + 1 < 1");
        }
    }

    #[test]
    fn verdict_paths_agree_on_random_games() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let mut checked = 0;
        while checked < 200 {
            let g = crate::quadratic::QuadraticGame::one_dim(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let spec = match rng.gen_range(0..5) {
                0 => AlgorithmSpec::gda(rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0)),
                1 => AlgorithmSpec::hb(rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0), rng.gen_range(-0.9..0.9)),
                2 => AlgorithmSpec::nag(rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0), rng.gen_range(-0.9..0.9)),
                3 => AlgorithmSpec::eg(rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0), rng.gen_range(0.5..4.0)).unwrap(),
                _ => AlgorithmSpec::ogd(rng.gen_range(1.01..3.0), rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0)).unwrap(),
            };
            let v = exponential_stability(&spec, &g, (&[0.0], &[0.0])).unwrap();
            if v.marginal_flags.iter().any(|&f| f) {
                continue;
            }
            assert!(v.agreement, "family {:?} on game disagrees: {v:?}", spec.family);
            checked += 1;
        }
    }

    #[test]
    fn eg_and_ogd_stabilize_nondegenerate_saddles() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..100 {
            // nondegenerate saddle: A ≻ 0 ≻ B
            let a = rng.gen_range(0.3..2.0);
            let b = -rng.gen_range(0.3..2.0);
            let cc = rng.gen_range(-1.5..1.5);
            let g = crate::quadratic::QuadraticGame::one_dim(a, b, cc);
            let jac = jacobian_h(&g, (&[0.0], &[0.0]), 1.0, 1.0);
            let eigs = general_eig(&jac.matrix).unwrap();
            let top = eigs.iter().map(|l| l.norm()).fold(0.0, f64::max);
            if top == 0.0 {
                continue;
            }
            // scale the shared step so 0 < |λ| < 1/α with margin
            let alpha = 0.9 / top;
            let eg = AlgorithmSpec::eg(alpha, alpha, 1.0).unwrap();
            let v = exponential_stability(&eg, &g, (&[0.0], &[0.0])).unwrap();
            assert!(v.stable, "EG(α,α,1) at a nondegenerate saddle, a={a} b={b} c={cc}");
            let k = rng.gen_range(1.01..2.0);
            let alpha_k = 0.9 / (k * top);
            let ogd = AlgorithmSpec::ogd(k, alpha_k, alpha_k).unwrap();
            let v = exponential_stability(&ogd, &g, (&[0.0], &[0.0])).unwrap();
            assert!(v.stable, "OGD(k,α,α) with 1<k≤2 at a nondegenerate saddle");
        }
    }

    #[test]
    fn raster_spot_checks() {
        let w = Window::figure_default();
        let gda = region_raster(RegionAlgo::Gda, w, 201, 201, 2);
        // the disc centered at -1 with radius 1
        let probe = |g: &RasterGrid, re: f64, im: f64| -> bool {
            let i_re = ((re - w.re_min) / (w.re_max - w.re_min) * 200.0).round() as usize;
            let i_im = ((im - w.im_min) / (w.im_max - w.im_min) * 200.0).round() as usize;
            g.at(i_re, i_im)
        };
        assert!(probe(&gda, -1.0, 0.0));
        assert!(!probe(&gda, 0.25, 0.0));
        assert!(!probe(&gda, -2.2, 0.0));

        let ogd = region_raster(RegionAlgo::OgdLimit, w, 201, 201, 2);
        assert!(!probe(&ogd, 0.3, 0.0), "inside the excluded half-disc");
        assert!(probe(&ogd, -0.5, 0.0));

        // HB ellipse elongation flips with the momentum sign
        let hb_pos = region_raster(RegionAlgo::Hb { beta: 0.4 }, w, 201, 201, 2);
        let hb_neg = region_raster(RegionAlgo::Hb { beta: -0.4 }, w, 201, 201, 2);
        assert!(probe(&hb_pos, -2.2, 0.0), "positive β stretches horizontally");
        assert!(!probe(&hb_neg, -2.2, 0.0));
        assert!(probe(&hb_neg, -0.6, 1.1), "negative β stretches vertically");
        assert!(!probe(&hb_pos, -0.6, 1.1));
    }

    #[test]
    fn nesting_checks() {
        let w = Window::figure_default();
        assert!(nesting_check(Family::Eg, &[(4.0, 2.0), (6.0, 4.0)], 4000, w, 7));
        assert!(nesting_check(Family::Ogd, &[(3.0, 1.5), (2.0, 1.1)], 4000, w, 8));
        // GDA region sits inside EG(β=1); inside |λ| < 1/√3 it also sits inside OGD(2)
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..4000 {
            let l = c(rng.gen_range(-2.5..0.5), rng.gen_range(-1.5..1.5));
            if stability_margin(Family::Gda, l, 0.0, 0.0) < MARGIN_BAND {
                continue;
            }
            if stable_gda(l) {
                if l.norm() < 1.0 && stability_margin(Family::Eg, l, 1.0, 0.0) >= MARGIN_BAND {
                    assert!(stable_eg(l, 1.0), "GDA ⊂ EG(1) fails at {l} inside the unit disk");
                }
                if l.norm() < 1.0 / 3.0_f64.sqrt()
                    && stability_margin(Family::Ogd, l, 0.0, 2.0) >= MARGIN_BAND
                {
                    assert!(stable_ogd(l, 2.0), "GDA ⊂ OGD(2) fails at {l}");
                }
            }
        }
    }

    #[test]
    fn two_timescale_search_on_strict_minimax() {
        let lng = fixture("local_non_global").unwrap();
        let x = 1.0 / 3.0_f64.sqrt();
        let gammas = [1.0, 2.0, 4.0, 8.0];
        let alphas = [0.05, 0.1, 0.2, 0.4];
        let (g0, a0) = strict_minimax_two_timescale_search(
            lng.oracle.as_ref(),
            (&[x], &[0.0]),
            &gammas,
            &alphas,
        )
        .unwrap();
        assert!(g0 < 8.0 && a0 > 0.05, "found γ₀ = {g0}, α₀ = {a0}");

        // decoupled contraction is stable already at small steps
        let g = crate::quadratic::QuadraticGame::one_dim(2.0, -2.0, 0.0);
        let (_, _) = strict_minimax_two_timescale_search(&g, (&[0.0], &[0.0]), &gammas, &alphas).unwrap();

        // degenerate yy-curvature refuses the search
        let nls = fixture("no_local_saddle").unwrap();
        assert!(matches!(
            strict_minimax_two_timescale_search(nls.oracle.as_ref(), (&[0.0], &[0.0]), &gammas, &alphas),
            Err(StabilityError::NotStrictMinimax)
        ));
    }
}
