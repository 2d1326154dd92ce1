//! Exact classification of unconstrained quadratic games: stationary sets,
//! global/local minimax and maximin, saddle points, local robust points and
//! closed-form envelope functions.
//!
//! A game is `q(x, y) = ½ xᵀA x + xᵀC y + ½ yᵀB y + aᵀx + bᵀy + ½ c`. All
//! solution sets are affine subspaces, produced here as a basepoint plus an
//! orthonormal basis of directions.

use crate::linalg::{
    self, definiteness, in_range, null_projector, pinv, pos_neg_parts, sym_eig, LinalgError, Mat,
    SymMat, RANK_TOL,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct QuadraticGame {
    pub a_mat: SymMat,
    pub b_mat: SymMat,
    pub c_mat: Mat,
    pub a_vec: Vec<f64>,
    pub b_vec: Vec<f64>,
    pub c0: f64,
}

impl QuadraticGame {
    pub fn new(
        a_mat: SymMat,
        b_mat: SymMat,
        c_mat: Mat,
        a_vec: Vec<f64>,
        b_vec: Vec<f64>,
        c0: f64,
    ) -> Result<Self, LinalgError> {
        if c_mat.rows() != a_mat.dim() || c_mat.cols() != b_mat.dim() {
            return Err(LinalgError::DimensionMismatch(format!(
                "coupling block is {}x{}, expected {}x{}",
                c_mat.rows(),
                c_mat.cols(),
                a_mat.dim(),
                b_mat.dim()
            )));
        }
        if a_vec.len() != a_mat.dim() || b_vec.len() != b_mat.dim() {
            return Err(LinalgError::DimensionMismatch("linear term length".into()));
        }
        if !a_vec.iter().chain(&b_vec).all(|v| v.is_finite()) || !c0.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self { a_mat, b_mat, c_mat, a_vec, b_vec, c0 })
    }

    /// Homogeneous 1+1-dimensional game `q = a/2 x² + c xy + b/2 y²`.
    pub fn one_dim(a: f64, b: f64, c: f64) -> Self {
        Self::new(
            SymMat::diag(&[a]),
            SymMat::diag(&[b]),
            Mat::new(1, 1, vec![c]).unwrap(),
            vec![0.0],
            vec![0.0],
            0.0,
        )
        .unwrap()
    }

    pub fn homogeneous(a_mat: SymMat, b_mat: SymMat, c_mat: Mat) -> Result<Self, LinalgError> {
        let (n, m) = (a_mat.dim(), b_mat.dim());
        Self::new(a_mat, b_mat, c_mat, vec![0.0; n], vec![0.0; m], 0.0)
    }

    pub fn n(&self) -> usize {
        self.a_mat.dim()
    }

    pub fn m(&self) -> usize {
        self.b_mat.dim()
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64, LinalgError> {
        self.check_dims(x, y)?;
        let ax = self.a_mat.mat().matvec(x);
        let by = self.b_mat.mat().matvec(y);
        let cy = self.c_mat.matvec(y);
        let quad = dot(x, &ax) + 2.0 * dot(x, &cy) + dot(y, &by);
        let lin = 2.0 * dot(&self.a_vec, x) + 2.0 * dot(&self.b_vec, y);
        Ok(0.5 * (quad + lin + self.c0))
    }

    /// `(∂ₓq, ∂ᵧq) = (Ax + Cy + a, Cᵀx + By + b)`.
    pub fn grad(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>), LinalgError> {
        self.check_dims(x, y)?;
        let mut gx = self.a_mat.mat().matvec(x);
        for (g, (c, a)) in gx.iter_mut().zip(self.c_mat.matvec(y).iter().zip(&self.a_vec)) {
            *g += c + a;
        }
        let mut gy = self.b_mat.mat().matvec(y);
        let ctx = self.c_mat.transpose().matvec(x);
        for (g, (c, b)) in gy.iter_mut().zip(ctx.iter().zip(&self.b_vec)) {
            *g += c + b;
        }
        Ok((gx, gy))
    }

    fn check_dims(&self, x: &[f64], y: &[f64]) -> Result<(), LinalgError> {
        if x.len() != self.n() || y.len() != self.m() {
            return Err(LinalgError::DimensionMismatch(format!(
                "point is {}+{} dimensional, game is {}+{}",
                x.len(),
                y.len(),
                self.n(),
                self.m()
            )));
        }
        Ok(())
    }

    /// Full symmetric curvature block `[[A, C], [Cᵀ, B]]`.
    pub fn block_matrix(&self) -> SymMat {
        let k = Mat::from_blocks(
            self.a_mat.mat(),
            &self.c_mat,
            &self.c_mat.transpose(),
            self.b_mat.mat(),
        );
        SymMat::new(k).expect("block matrix is symmetric by construction")
    }

    /// Solution set of `grad = 0`, i.e. `[[A,C],[Cᵀ,B]]·[x;y] = −[a;b]`.
    pub fn stationary_set(&self, tol: f64) -> AffineSet {
        let k = self.block_matrix();
        let mut rhs: Vec<f64> = self.a_vec.iter().chain(&self.b_vec).map(|v| -v).collect();
        solve_symmetric_affine(&k, &mut rhs, tol)
    }

    /// The game seen from the opponent: payoff `−q` with roles swapped, so
    /// maximin analysis of `q` is minimax analysis of `q.mirror()`.
    pub fn mirror(&self) -> QuadraticGame {
        QuadraticGame {
            a_mat: SymMat::new(self.b_mat.mat().neg()).unwrap(),
            b_mat: SymMat::new(self.a_mat.mat().neg()).unwrap(),
            c_mat: self.c_mat.transpose().neg(),
            a_vec: self.b_vec.iter().map(|v| -v).collect(),
            b_vec: self.a_vec.iter().map(|v| -v).collect(),
            c0: -self.c0,
        }
    }

    /// Closed-form local envelope of a 1+1-dimensional homogeneous game
    /// centered at the origin, valid for small `point`.
    pub fn envelope_1d(&self, kind: EnvelopeKind, eps: f64, point: f64) -> Result<f64, LinalgError> {
        if self.n() != 1 || self.m() != 1 {
            return Err(LinalgError::DimensionMismatch(
                "closed-form envelope needs a 1+1-dimensional game".into(),
            ));
        }
        let a = self.a_mat[(0, 0)];
        let b = self.b_mat[(0, 0)];
        let c = self.c_mat[(0, 0)];
        Ok(match kind {
            EnvelopeKind::Upper => {
                if eps == 0.0 {
                    0.5 * a * point * point
                } else if b >= 0.0 {
                    (c * point).abs() * eps + 0.5 * b * eps * eps + 0.5 * a * point * point
                } else {
                    (c * c - a * b) * point * point / (-2.0 * b)
                }
            }
            EnvelopeKind::Lower => {
                if eps == 0.0 {
                    0.5 * b * point * point
                } else if a <= 0.0 {
                    -(c * point).abs() * eps + 0.5 * b * point * point + 0.5 * a * eps * eps
                } else {
                    -(c * c - a * b) * point * point / (2.0 * a)
                }
            }
        })
    }

    /// Global upper envelope `q̄(x) = sup_y q(x, y)`, finite on an affine
    /// subspace of x whenever `B ⪯ 0`.
    pub fn upper_envelope(&self, tol: f64) -> UpperEnvelope {
        let b_def = definiteness(&self.b_mat, tol);
        if !b_def.is_nsd() {
            return UpperEnvelope {
                finite: false,
                domain: AffineSet::empty(self.n()),
                quad: SymMat::zeros(self.n()),
                linear: vec![0.0; self.n()],
                constant: 0.0,
            };
        }
        let b_pinv = pinv(self.b_mat.mat(), RANK_TOL);
        let p_b = null_projector(self.b_mat.mat(), RANK_TOL);
        let l = self.c_mat.matmul(p_b.mat());
        // domain: Lᵀ x = −P_B b
        let lt = l.transpose();
        let mut rhs: Vec<f64> = p_b.mat().matvec(&self.b_vec).iter().map(|v| -v).collect();
        let domain = solve_general_affine(&lt, &mut rhs, tol);
        let cbc = self.c_mat.matmul(&b_pinv).matmul(&self.c_mat.transpose());
        let quad_mat = self.a_mat.mat().sub(&cbc);
        let mut quad_sym = quad_mat.clone();
        for i in 0..quad_mat.rows() {
            for j in 0..quad_mat.cols() {
                quad_sym[(i, j)] = 0.5 * (quad_mat[(i, j)] + quad_mat[(j, i)]);
            }
        }
        let cbb = self.c_mat.matmul(&b_pinv).matvec(&self.b_vec);
        let linear: Vec<f64> = self.a_vec.iter().zip(&cbb).map(|(a, c)| a - c).collect();
        let constant = 0.5 * (self.c0 - dot(&self.b_vec, &b_pinv.matvec(&self.b_vec)));
        UpperEnvelope {
            finite: true,
            domain,
            quad: SymMat::new(quad_sym).expect("Schur term is symmetric"),
            linear,
            constant,
        }
    }

    /// Full classification of the game per the quadratic-game theory.
    pub fn classify(&self, tol: f64) -> ClassificationReport {
        let mut trace = Vec::new();
        let stationary = self.stationary_set(tol.max(1e-12));
        let k = self.block_matrix();
        let rhs: Vec<f64> = self.a_vec.iter().chain(&self.b_vec).copied().collect();
        let range_residual = linalg::range_residual(k.mat(), &rhs);
        let range_ok = in_range(k.mat(), &rhs, tol).unwrap();
        trace.push(ConditionRecord::new("rhs_in_range", range_ok, range_residual));

        let minimax = self.minimax_conditions(tol, "minimax", &mut trace);
        let mirrored = self.mirror();
        let maximin = mirrored.minimax_conditions(tol, "maximin", &mut trace);

        let gmm_exists = minimax.curvature_ok && range_ok;
        let gmx_exists = maximin.curvature_ok && range_ok;

        let global_minimax_set = if gmm_exists {
            self.global_minimax_set(tol)
        } else {
            AffineSet::empty(self.n() + self.m())
        };
        let global_maximin_set = if gmx_exists {
            swap_halves(&mirrored.global_minimax_set(tol), self.m(), self.n())
        } else {
            AffineSet::empty(self.n() + self.m())
        };

        let local_minimax_set = if gmm_exists { stationary.clone() } else { AffineSet::empty(self.n() + self.m()) };
        let local_maximin_set = if gmx_exists { stationary.clone() } else { AffineSet::empty(self.n() + self.m()) };

        // saddle: A ⪰ 0 ⪰ B plus the range condition; the saddle set then
        // coincides with the stationary set
        let a_def = definiteness(&self.a_mat, tol);
        let b_def = definiteness(&self.b_mat, tol);
        let saddle_curvature = a_def.is_psd() && b_def.is_nsd();
        trace.push(ConditionRecord::new(
            "saddle_A_psd_B_nsd",
            saddle_curvature,
            min_eig(&self.a_mat).min(-max_eig(&self.b_mat)),
        ));
        let saddle_exists = saddle_curvature && range_ok;

        // local robust points over eigenspace neighborhoods
        let lrp_cond = self.lrp_conditions(tol, &mut trace);
        let lrp_exists = lrp_cond && !stationary.empty;

        ClassificationReport {
            stationary: stationary.clone(),
            global_minimax: ConceptVerdict { exists: gmm_exists, set: global_minimax_set },
            local_minimax: ConceptVerdict { exists: gmm_exists, set: local_minimax_set },
            global_maximin: ConceptVerdict { exists: gmx_exists, set: global_maximin_set },
            local_maximin: ConceptVerdict { exists: gmx_exists, set: local_maximin_set },
            saddle: ConceptVerdict {
                exists: saddle_exists,
                set: if saddle_exists { stationary.clone() } else { AffineSet::empty(self.n() + self.m()) },
            },
            lrp: LrpVerdict {
                exists: lrp_exists,
                set: if lrp_exists { stationary } else { AffineSet::empty(self.n() + self.m()) },
                neighborhood_note:
                    "verified over eigenspace neighborhoods aligned with the eigenvectors of the A and B blocks"
                        .to_string(),
            },
            condition_trace: trace,
        }
    }

    fn minimax_conditions(&self, tol: f64, label: &str, trace: &mut Vec<ConditionRecord>) -> CurvatureCheck {
        let b_def = definiteness(&self.b_mat, tol);
        let b_ok = b_def.is_nsd();
        trace.push(ConditionRecord::new(
            &format!("{label}_B_nsd"),
            b_ok,
            -max_eig(&self.b_mat),
        ));
        let schur = self.projected_schur();
        let schur_min = min_eig(&schur);
        let schur_ok = definiteness(&schur, tol).is_psd();
        trace.push(ConditionRecord::new(
            &format!("{label}_projected_schur_psd"),
            schur_ok,
            schur_min,
        ));
        CurvatureCheck { curvature_ok: b_ok && schur_ok }
    }

    /// `P_L (A − C B† Cᵀ) P_L` with `L = C P_B`.
    fn projected_schur(&self) -> SymMat {
        let p_b = null_projector(self.b_mat.mat(), RANK_TOL);
        let l = self.c_mat.matmul(p_b.mat());
        let p_l = null_projector(&l, RANK_TOL);
        let b_pinv = pinv(self.b_mat.mat(), RANK_TOL);
        let s = self
            .a_mat
            .mat()
            .sub(&self.c_mat.matmul(&b_pinv).matmul(&self.c_mat.transpose()));
        let proj = p_l.mat().matmul(&s).matmul(p_l.mat());
        let mut sym = proj.clone();
        for i in 0..proj.rows() {
            for j in 0..proj.cols() {
                sym[(i, j)] = 0.5 * (proj[(i, j)] + proj[(j, i)]);
            }
        }
        SymMat::new(sym).expect("projected Schur term is symmetric")
    }

    /// Solutions of `diag(P_L, I)·K·z = −diag(P_L, I)·[a; b]`.
    fn global_minimax_set(&self, tol: f64) -> AffineSet {
        let p_b = null_projector(self.b_mat.mat(), RANK_TOL);
        let l = self.c_mat.matmul(p_b.mat());
        let p_l = null_projector(&l, RANK_TOL);
        let k = self.block_matrix();
        let n = self.n();
        let m = self.m();
        let total = n + m;
        let mut proj = Mat::identity(total);
        for i in 0..n {
            for j in 0..total {
                proj[(i, j)] = if j < n { p_l[(i, j)] } else { 0.0 };
            }
        }
        let system = proj.matmul(k.mat());
        let rhs_full: Vec<f64> = self.a_vec.iter().chain(&self.b_vec).map(|v| -v).collect();
        let mut rhs = proj.matvec(&rhs_full);
        solve_general_affine(&system, &mut rhs, tol)
    }

    fn lrp_conditions(&self, tol: f64, trace: &mut Vec<ConditionRecord>) -> bool {
        let (a_pos, _) = pos_neg_parts(&self.a_mat, RANK_TOL);
        let (_, b_neg) = pos_neg_parts(&self.b_mat, RANK_TOL);

        let p_bn = null_projector(b_neg.mat(), RANK_TOL);
        let l = self.c_mat.matmul(p_bn.mat());
        let p_l = null_projector(&l, RANK_TOL);
        let bn_pinv = pinv(b_neg.mat(), RANK_TOL);
        let s1 = self
            .a_mat
            .mat()
            .sub(&self.c_mat.matmul(&bn_pinv).matmul(&self.c_mat.transpose()));
        let proj1 = symmetrized(&p_l.mat().matmul(&s1).matmul(p_l.mat()));
        let cond1 = definiteness(&proj1, tol).is_psd();
        trace.push(ConditionRecord::new("lrp_negative_branch_psd", cond1, min_eig(&proj1)));

        let p_ap = null_projector(a_pos.mat(), RANK_TOL);
        let m_mat = self.c_mat.transpose().matmul(p_ap.mat());
        let p_m = null_projector(&m_mat, RANK_TOL);
        let ap_pinv = pinv(a_pos.mat(), RANK_TOL);
        let s2 = self
            .b_mat
            .mat()
            .sub(&self.c_mat.transpose().matmul(&ap_pinv).matmul(&self.c_mat));
        let proj2 = symmetrized(&p_m.mat().matmul(&s2).matmul(p_m.mat()));
        let cond2 = definiteness(&proj2, tol).is_nsd();
        trace.push(ConditionRecord::new("lrp_positive_branch_nsd", cond2, -max_eig(&proj2)));

        cond1 && cond2
    }
}

struct CurvatureCheck {
    curvature_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Upper,
    Lower,
}

/// Affine solution subspace: `basepoint + span(basis columns)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineSet {
    pub empty: bool,
    pub basepoint: Vec<f64>,
    /// Orthonormal direction basis, one inner vector per column.
    pub basis: Vec<Vec<f64>>,
}

impl AffineSet {
    pub fn empty(dim: usize) -> Self {
        Self { empty: true, basepoint: vec![0.0; dim], basis: vec![] }
    }

    pub fn point(p: Vec<f64>) -> Self {
        Self { empty: false, basepoint: p, basis: vec![] }
    }

    pub fn dim(&self) -> Option<usize> {
        if self.empty {
            None
        } else {
            Some(self.basis.len())
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basepoint.len()
    }

    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        if self.empty || point.len() != self.basepoint.len() {
            return false;
        }
        let mut delta: Vec<f64> = point.iter().zip(&self.basepoint).map(|(p, b)| p - b).collect();
        for col in &self.basis {
            let c = dot(&delta, col);
            for (d, v) in delta.iter_mut().zip(col) {
                *d -= c * v;
            }
        }
        norm(&delta) <= tol * (1.0 + norm(point))
    }

    pub fn is_subset_of(&self, other: &AffineSet, tol: f64) -> bool {
        if self.empty {
            return true;
        }
        if other.empty {
            return false;
        }
        if !other.contains(&self.basepoint, tol) {
            return false;
        }
        self.basis.iter().all(|col| {
            let shifted: Vec<f64> = self
                .basepoint
                .iter()
                .zip(col)
                .map(|(b, v)| b + v)
                .collect();
            other.contains(&shifted, tol)
        })
    }

    pub fn same_set(&self, other: &AffineSet, tol: f64) -> bool {
        (self.empty && other.empty)
            || (self.is_subset_of(other, tol) && other.is_subset_of(self, tol))
    }
}

/// Swap the two coordinate halves of a set living in (first, second) space.
pub fn swap_halves(set: &AffineSet, first: usize, second: usize) -> AffineSet {
    let swap = |v: &[f64]| -> Vec<f64> {
        let mut out = Vec::with_capacity(first + second);
        out.extend_from_slice(&v[first..]);
        out.extend_from_slice(&v[..first]);
        out
    };
    AffineSet {
        empty: set.empty,
        basepoint: swap(&set.basepoint),
        basis: set.basis.iter().map(|c| swap(c)).collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConceptVerdict {
    pub exists: bool,
    pub set: AffineSet,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LrpVerdict {
    pub exists: bool,
    pub set: AffineSet,
    pub neighborhood_note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub name: String,
    pub holds: bool,
    pub witness: f64,
}

impl ConditionRecord {
    fn new(name: &str, holds: bool, witness: f64) -> Self {
        Self { name: name.to_string(), holds, witness }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub stationary: AffineSet,
    pub global_minimax: ConceptVerdict,
    pub local_minimax: ConceptVerdict,
    pub global_maximin: ConceptVerdict,
    pub local_maximin: ConceptVerdict,
    pub saddle: ConceptVerdict,
    pub lrp: LrpVerdict,
    pub condition_trace: Vec<ConditionRecord>,
}

/// Upper envelope of a quadratic game: a quadratic form restricted to the
/// affine domain where the inner maximum is finite.
#[derive(Debug, Clone)]
pub struct UpperEnvelope {
    /// False when `B` has positive curvature, making the envelope +∞ everywhere.
    pub finite: bool,
    pub domain: AffineSet,
    pub quad: SymMat,
    pub linear: Vec<f64>,
    pub constant: f64,
}

impl UpperEnvelope {
    pub fn value(&self, x: &[f64]) -> Option<f64> {
        if !self.finite || !self.domain.contains(x, 1e-7) {
            return None;
        }
        let qx = self.quad.mat().matvec(x);
        Some(0.5 * dot(x, &qx) + dot(&self.linear, x) + self.constant)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn min_eig(s: &SymMat) -> f64 {
    sym_eig(s).eigenvalues.last().copied().unwrap_or(0.0)
}

fn max_eig(s: &SymMat) -> f64 {
    sym_eig(s).eigenvalues.first().copied().unwrap_or(0.0)
}

fn symmetrized(m: &Mat) -> SymMat {
    let mut s = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            s[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    SymMat::new(s).expect("symmetrized")
}

/// Minimum-norm solution plus eigen-null-space basis of `K z = rhs` for
/// symmetric `K`.
fn solve_symmetric_affine(k: &SymMat, rhs: &mut Vec<f64>, tol: f64) -> AffineSet {
    let dec = sym_eig(k);
    let scale = dec.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let cut = RANK_TOL * 1.0_f64.max(scale);
    let n = k.dim();
    let mut basepoint = vec![0.0; n];
    let mut basis = Vec::new();
    for (i, &lam) in dec.eigenvalues.iter().enumerate() {
        let v = dec.eigenvectors.column(i);
        if lam.abs() <= cut {
            basis.push(v);
        } else {
            let coef = dot(&v, rhs) / lam;
            for (b, vi) in basepoint.iter_mut().zip(&v) {
                *b += coef * vi;
            }
        }
    }
    let residual: Vec<f64> = k
        .mat()
        .matvec(&basepoint)
        .iter()
        .zip(rhs.iter())
        .map(|(a, b)| a - b)
        .collect();
    if norm(&residual) > tol * (1.0 + norm(rhs)) {
        return AffineSet::empty(n);
    }
    AffineSet { empty: false, basepoint, basis }
}

/// Same as [`solve_symmetric_affine`] for a general rectangular system,
/// using the SVD for both the particular solution and the null basis.
fn solve_general_affine(m: &Mat, rhs: &mut Vec<f64>, tol: f64) -> AffineSet {
    let mi = pinv(m, RANK_TOL);
    let basepoint = mi.matvec(rhs);
    let residual: Vec<f64> = m
        .matvec(&basepoint)
        .iter()
        .zip(rhs.iter())
        .map(|(a, b)| a - b)
        .collect();
    if norm(&residual) > tol * (1.0 + norm(rhs)) {
        return AffineSet::empty(m.cols());
    }
    let decomp = linalg::svd(m);
    let cut = RANK_TOL * 1.0_f64.max(decomp.sigma.first().copied().unwrap_or(0.0));
    let mut basis = Vec::new();
    for (k, &s) in decomp.sigma.iter().enumerate() {
        if s <= cut {
            basis.push(decomp.v.column(k));
        }
    }
    // a wide system leaves cols − rank null directions beyond the σ list
    if m.rows() < m.cols() {
        // complete the null basis by projecting coordinate vectors
        let rank_cols: Vec<Vec<f64>> = (0..decomp.sigma.len())
            .filter(|&k| decomp.sigma[k] > cut)
            .map(|k| decomp.v.column(k))
            .collect();
        basis = complete_null_basis(m.cols(), &rank_cols);
    }
    AffineSet { empty: false, basepoint, basis }
}

fn complete_null_basis(dim: usize, range_basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..dim {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        for col in range_basis.iter().chain(basis.iter()) {
            let c = dot(&v, col);
            for (x, y) in v.iter_mut().zip(col) {
                *x -= c * y;
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            basis.push(v.iter().map(|x| x / nv).collect());
        }
    }
    basis
}

// ── JSON wire format ────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct GameDto {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    #[serde(rename = "a")]
    a_lin: Vec<f64>,
    #[serde(rename = "b")]
    b_lin: Vec<f64>,
    #[serde(rename = "c")]
    c_const: f64,
}

impl QuadraticGame {
    pub fn from_json(text: &str) -> Result<Self, GameParseError> {
        let dto: GameDto = serde_json::from_str(text).map_err(|e| GameParseError::Json(e.to_string()))?;
        let a = SymMat::from_rows(&dto.a).map_err(GameParseError::Dimension)?;
        let b = SymMat::from_rows(&dto.b).map_err(GameParseError::Dimension)?;
        let c = Mat::from_rows(&dto.c).map_err(GameParseError::Dimension)?;
        QuadraticGame::new(a, b, c, dto.a_lin, dto.b_lin, dto.c_const).map_err(GameParseError::Dimension)
    }

    pub fn to_json(&self) -> String {
        let dto = GameDto {
            a: self.a_mat.mat().to_rows(),
            b: self.b_mat.mat().to_rows(),
            c: self.c_mat.to_rows(),
            a_lin: self.a_vec.clone(),
            b_lin: self.b_vec.clone(),
            c_const: self.c0,
        };
        serde_json::to_string_pretty(&dto).expect("game serialization cannot fail")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GameParseError {
    #[error("invalid game JSON: {0}")]
    Json(String),
    #[error("inconsistent game dimensions: {0}")]
    Dimension(#[from] LinalgError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::EIG_TOL;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn game_no_local_saddle() -> QuadraticGame {
        // q = -x² + xy
        QuadraticGame::one_dim(-2.0, 0.0, 1.0)
    }

    fn game_bilinear() -> QuadraticGame {
        QuadraticGame::one_dim(0.0, 0.0, 1.0)
    }

    fn game_glp() -> QuadraticGame {
        // q = -x² + xy + y²
        QuadraticGame::one_dim(-2.0, 2.0, 1.0)
    }

    fn game_failure_lrp() -> QuadraticGame {
        // q = -x1² + x1 y1 + x2 y2 + y2²
        QuadraticGame::homogeneous(
            SymMat::diag(&[-2.0, 0.0]),
            SymMat::diag(&[0.0, 2.0]),
            Mat::identity(2),
        )
        .unwrap()
    }

    fn random_game(rng: &mut ChaCha8Rng, n: usize, m: usize) -> QuadraticGame {
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-3.0..3.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let mut b = Mat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = rng.gen_range(-3.0..3.0);
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
        }
        let c = Mat::new(n, m, (0..n * m).map(|_| rng.gen_range(-3.0..3.0)).collect()).unwrap();
        QuadraticGame::new(
            SymMat::new(a).unwrap(),
            SymMat::new(b).unwrap(),
            c,
            (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect(),
            (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect(),
            rng.gen_range(-3.0..3.0),
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let g = game_no_local_saddle();
        assert!((g.eval(&[1.0], &[1.0]).unwrap() - 0.0).abs() < 1e-12);
        let g2 = QuadraticGame::new(
            SymMat::diag(&[1.0]),
            SymMat::diag(&[1.0]),
            Mat::zeros(1, 1),
            vec![0.0],
            vec![0.0],
            4.0,
        )
        .unwrap();
        assert!((g2.eval(&[0.0], &[0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((game_bilinear().eval(&[2.0], &[3.0]).unwrap() - 6.0).abs() < 1e-12);
        assert!(game_bilinear().eval(&[1.0, 2.0], &[3.0]).is_err());
    }

    #[test]
    fn grad_examples() {
        let g = game_no_local_saddle();
        let (gx, gy) = g.grad(&[1.0], &[1.0]).unwrap();
        assert!((gx[0] - -1.0).abs() < 1e-12);
        assert!((gy[0] - 1.0).abs() < 1e-12);
        let (gx, gy) = g.grad(&[0.0], &[0.0]).unwrap();
        assert_eq!((gx[0], gy[0]), (0.0, 0.0));
        let (gx, gy) = game_bilinear().grad(&[2.0], &[3.0]).unwrap();
        assert!((gx[0] - 3.0).abs() < 1e-12 && (gy[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grad_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = random_game(&mut rng, 2, 2);
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let y = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let (gx, gy) = g.grad(&x, &y).unwrap();
            let h = 1e-6;
            for i in 0..2 {
                let mut xp = x;
                xp[i] += h;
                let mut xm = x;
                xm[i] -= h;
                let fd = (g.eval(&xp, &y).unwrap() - g.eval(&xm, &y).unwrap()) / (2.0 * h);
                assert!((fd - gx[i]).abs() < 1e-5, "grad_x fd mismatch");
            }
            for j in 0..2 {
                let mut yp = y;
                yp[j] += h;
                let mut ym = y;
                ym[j] -= h;
                let fd = (g.eval(&x, &yp).unwrap() - g.eval(&x, &ym).unwrap()) / (2.0 * h);
                assert!((fd - gy[j]).abs() < 1e-5, "grad_y fd mismatch");
            }
        }
    }

    #[test]
    fn stationary_set_examples() {
        let s = game_no_local_saddle().stationary_set(1e-8);
        assert!(!s.empty);
        assert_eq!(s.dim(), Some(0));
        assert!(norm(&s.basepoint) < 1e-10);

        let s = game_bilinear().stationary_set(1e-8);
        assert_eq!(s.dim(), Some(0));
        assert!(norm(&s.basepoint) < 1e-10);

        // q = x² - y² shifted by a = 2: stationary at (-1, 0)
        let g = QuadraticGame::new(
            SymMat::diag(&[2.0]),
            SymMat::diag(&[-2.0]),
            Mat::zeros(1, 1),
            vec![2.0],
            vec![0.0],
            0.0,
        )
        .unwrap();
        let s = g.stationary_set(1e-8);
        assert!((s.basepoint[0] - -1.0).abs() < 1e-10);
        assert!((s.basepoint[1] - 0.0).abs() < 1e-10);
        let (gx, gy) = g.grad(&[s.basepoint[0]], &[s.basepoint[1]]).unwrap();
        assert!(gx[0].abs() < 1e-10 && gy[0].abs() < 1e-10);
    }

    #[test]
    fn classify_no_local_saddle_game() {
        let r = game_no_local_saddle().classify(EIG_TOL);
        assert!(r.local_minimax.exists);
        assert!(r.global_minimax.exists);
        assert!(!r.saddle.exists);
        assert!(r.local_minimax.set.contains(&[0.0, 0.0], 1e-9));
        assert!(r.lrp.exists, "local minimax points are robust");
    }

    #[test]
    fn classify_oned_sweep_example() {
        // q = -x² - y² + 2xy has global minimax points but no maximin/saddle
        let g = QuadraticGame::one_dim(-2.0, -2.0, 2.0);
        let r = g.classify(EIG_TOL);
        assert!(r.global_minimax.exists);
        assert!(!r.global_maximin.exists);
        assert!(!r.saddle.exists);
    }

    #[test]
    fn classify_bilinear() {
        let r = game_bilinear().classify(EIG_TOL);
        assert!(r.global_minimax.exists);
        assert!(r.saddle.exists);
        assert!(r.saddle.set.contains(&[0.0, 0.0], 1e-9));
        assert_eq!(r.saddle.set.dim(), Some(0));
        // global minimax set is {0} x R
        assert_eq!(r.global_minimax.set.dim(), Some(1));
        assert!(r.global_minimax.set.contains(&[0.0, 5.0], 1e-8));
        assert!(!r.global_minimax.set.contains(&[1.0, 0.0], 1e-6));
        // local minimax set is the stationary point only
        assert_eq!(r.local_minimax.set.dim(), Some(0));
    }

    #[test]
    fn classify_glp_game() {
        let r = game_glp().classify(EIG_TOL);
        assert!(r.lrp.exists);
        assert!(!r.local_minimax.exists);
        assert!(!r.local_maximin.exists);
        assert!(!r.saddle.exists);
        assert!(r.lrp.set.contains(&[0.0, 0.0], 1e-9));
    }

    #[test]
    fn classify_failure_lrp_game() {
        let r = game_failure_lrp().classify(EIG_TOL);
        assert!(r.lrp.exists);
        assert!(!r.local_minimax.exists);
        assert!(!r.local_maximin.exists);
        assert_eq!(r.stationary.dim(), Some(0));
        assert!(r.lrp.set.contains(&[0.0; 4], 1e-9));
    }

    #[test]
    fn classify_separable_no_lrp() {
        let g = QuadraticGame::one_dim(-2.0, 2.0, 0.0);
        let r = g.classify(EIG_TOL);
        assert!(!r.lrp.exists);
        assert!(!r.local_minimax.exists);
        assert!(!r.local_maximin.exists);
    }

    #[test]
    fn envelope_1d_examples() {
        let g = game_glp();
        let up = g.envelope_1d(EnvelopeKind::Upper, 0.5, 0.1).unwrap();
        assert!((up - 0.29).abs() < 1e-12, "upper envelope {up}");
        let lo = g.envelope_1d(EnvelopeKind::Lower, 0.5, 0.1).unwrap();
        assert!((lo - -0.29).abs() < 1e-12, "lower envelope {lo}");
        let at_zero = g.envelope_1d(EnvelopeKind::Upper, 0.0, 0.3).unwrap();
        assert!((at_zero - g.eval(&[0.3], &[0.0]).unwrap()).abs() < 1e-12);
        assert!(game_failure_lrp().envelope_1d(EnvelopeKind::Upper, 0.1, 0.0).is_err());
    }

    #[test]
    fn envelope_1d_matches_grid_maximization() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let a = rng.gen_range(-2.0..2.0);
            let b = rng.gen_range(-2.0..2.0);
            let c = rng.gen_range(-2.0..2.0_f64);
            let g = QuadraticGame::one_dim(a, b, c);
            for &eps in &[0.1, 0.5] {
                // the closed form holds in the small-|x| regime where an
                // interior unconstrained maximizer stays inside the ball
                let limit = if b < 0.0 {
                    eps * (b.abs() / c.abs().max(1e-9)).min(1.0)
                } else {
                    eps
                };
                let x = rng.gen_range(-1.0..1.0) * limit;
                let closed = g.envelope_1d(EnvelopeKind::Upper, eps, x).unwrap();
                let mut best = f64::NEG_INFINITY;
                let steps = 4000;
                for k in 0..=steps {
                    let y = -eps + 2.0 * eps * k as f64 / steps as f64;
                    best = best.max(g.eval(&[x], &[y]).unwrap());
                }
                assert!(
                    (closed - best).abs() < 1e-6,
                    "envelope mismatch a={a} b={b} c={c} eps={eps} x={x}: {closed} vs {best}"
                );
            }
        }
    }

    #[test]
    fn upper_envelope_quadratic_examples() {
        // q = -x² + xy: B = 0, L = 1, domain {0}, value 0
        let env = game_no_local_saddle().upper_envelope(EIG_TOL);
        assert!(env.finite);
        assert_eq!(env.domain.dim(), Some(0));
        assert!((env.value(&[0.0]).unwrap() - 0.0).abs() < 1e-12);
        assert!(env.value(&[1.0]).is_none(), "outside the finite domain");

        // q = -x² - y² + xy: Schur term -2 + 0.5 = -1.5
        let g = QuadraticGame::one_dim(-2.0, -2.0, 1.0);
        let env = g.upper_envelope(EIG_TOL);
        assert!(env.finite);
        assert_eq!(env.domain.dim(), Some(1), "domain is all of R");
        assert!((env.quad[(0, 0)] - -1.5).abs() < 1e-12);
        // cross-check by direct grid maximization over y
        for &x in &[0.0, 0.3, -0.7] {
            let mut best = f64::NEG_INFINITY;
            for k in 0..=40000 {
                let y = -20.0 + k as f64 * 0.001;
                best = best.max(g.eval(&[x], &[y]).unwrap());
            }
            assert!((env.value(&[x]).unwrap() - best).abs() < 1e-5, "grid check at {x}");
        }

        // decoupled: C = 0, B ≺ 0 leaves the x-quadratic untouched
        let g = QuadraticGame::one_dim(1.4, -2.0, 0.0);
        let env = g.upper_envelope(EIG_TOL);
        assert!((env.quad[(0, 0)] - 1.4).abs() < 1e-12);

        // B with positive curvature: envelope infinite
        assert!(!game_glp().upper_envelope(EIG_TOL).finite);
    }

    #[test]
    fn mirror_is_involution_and_swaps_reports() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let g = random_game(&mut rng, 2, 1);
            let gm = g.mirror().mirror();
            assert!(g.a_mat.mat().sub(gm.a_mat.mat()).max_abs() < 1e-14);
            assert!(g.c_mat.sub(&gm.c_mat).max_abs() < 1e-14);
            assert_eq!(g.c0, gm.c0);
        }
        // classification swaps minimax and maximin under mirroring
        for _ in 0..30 {
            let g = random_game(&mut rng, 2, 2);
            let r = g.classify(EIG_TOL);
            let rm = g.mirror().classify(EIG_TOL);
            assert_eq!(r.global_minimax.exists, rm.global_maximin.exists);
            assert_eq!(r.global_maximin.exists, rm.global_minimax.exists);
            assert_eq!(r.saddle.exists, rm.saddle.exists);
        }
        let r = game_no_local_saddle().mirror().classify(EIG_TOL);
        assert!(r.local_maximin.exists);
        assert!(r.local_maximin.set.contains(&[0.0, 0.0], 1e-9));
    }

    #[test]
    fn saddle_equivalence_on_random_games() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for k in 0..200 {
            let n = 1 + k % 3;
            let m = 1 + (k / 3) % 3;
            let g = random_game(&mut rng, n, m);
            let r = g.classify(EIG_TOL);
            assert_eq!(
                r.saddle.exists,
                r.global_minimax.exists && r.global_maximin.exists,
                "saddle iff minimax and maximin"
            );
            assert_eq!(r.global_minimax.exists, r.local_minimax.exists);
            assert_eq!(r.global_maximin.exists, r.local_maximin.exists);
            if r.local_minimax.exists {
                assert!(
                    r.local_minimax.set.is_subset_of(&r.global_minimax.set, 1e-6),
                    "local minimax within global minimax"
                );
                assert!(r.local_minimax.set.same_set(&r.stationary, 1e-6));
            }
        }
    }

    #[test]
    fn game_json_round_trip() {
        let g = game_failure_lrp();
        let text = g.to_json();
        let back = QuadraticGame::from_json(&text).unwrap();
        assert!(g.a_mat.mat().sub(back.a_mat.mat()).max_abs() == 0.0);
        assert!(g.c_mat.sub(&back.c_mat).max_abs() == 0.0);
        assert!(QuadraticGame::from_json("{").is_err());
        let bad = r#"{"A": [[1.0]], "B": [[1.0]], "C": [[1.0, 2.0]], "a": [0.0], "b": [0.0], "c": 0.0}"#;
        assert!(matches!(QuadraticGame::from_json(bad), Err(GameParseError::Dimension(_))));
    }
}
