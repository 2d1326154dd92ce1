//! Derivative-based optimality tests at candidate points: first-order
//! stationarity, the invertible-Hessian second-order necessary and
//! sufficient tests, and sampled local-saddle checks.

use crate::envelope::Verdict;
use crate::linalg::{definiteness, sym_eig, Definiteness, Mat, SymMat};
use crate::oracle::SmoothGame;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OptimalityError {
    #[error("point is not stationary (gradient norm {0:.3e})")]
    NotStationary(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstOrderReport {
    pub stationary: bool,
    pub grad_x_norm: f64,
    pub grad_y_norm: f64,
}

/// Interior first-order test: both partial gradients vanish within
/// `tol · (1 + gradient scale)`.
pub fn first_order_check(game: &dyn SmoothGame, point: (&[f64], &[f64]), tol: f64) -> FirstOrderReport {
    let gx = game.grad_x(point.0, point.1);
    let gy = game.grad_y(point.0, point.1);
    let nx = norm(&gx);
    let ny = norm(&gy);
    let scale = 1.0;
    FirstOrderReport {
        stationary: nx <= tol * scale && ny <= tol * scale,
        grad_x_norm: nx,
        grad_y_norm: ny,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SecondOrderVerdict {
    SufficientStrictLocalMinimax,
    NecessaryHolds,
    NecessaryFails,
    DegenerateYY,
}

#[derive(Debug, Clone, Serialize)]
pub struct SecondOrderReport {
    pub grad_norm: f64,
    pub yy_definiteness: Definiteness,
    /// `∂²ₓₓf − ∂²ₓᵧf (∂²ᵧᵧf)⁻¹ ∂²ᵧₓf`, populated when the yy block is
    /// invertible at tolerance.
    pub schur_complement: Option<SymMat>,
    pub schur_definiteness: Option<Definiteness>,
    pub verdict: SecondOrderVerdict,
}

/// Second-order classification at a stationary point with invertible
/// yy-curvature. A singular yy block routes the caller to the numeric
/// envelope verification instead.
pub fn second_order_invertible(
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
    tol: f64,
) -> Result<SecondOrderReport, OptimalityError> {
    let first = first_order_check(game, point, tol.max(1e-7));
    let grad_norm = (first.grad_x_norm.powi(2) + first.grad_y_norm.powi(2)).sqrt();
    if !first.stationary {
        return Err(OptimalityError::NotStationary(grad_norm));
    }
    let hyy = symmetrized(&game.hess_yy(point.0, point.1));
    let yy_def = definiteness(&hyy, tol);
    let dec = sym_eig(&hyy);
    let max_abs = dec.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let min_abs = dec.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if min_abs <= 1e-7 * (1.0 + max_abs) {
        return Ok(SecondOrderReport {
            grad_norm,
            yy_definiteness: yy_def,
            schur_complement: None,
            schur_definiteness: None,
            verdict: SecondOrderVerdict::DegenerateYY,
        });
    }
    // invert through the eigendecomposition
    let n = hyy.dim();
    let mut inv = Mat::zeros(n, n);
    for (k, &lam) in dec.eigenvalues.iter().enumerate() {
        let v = dec.eigenvectors.column(k);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] += v[i] * v[j] / lam;
            }
        }
    }
    let hxx = game.hess_xx(point.0, point.1);
    let hxy = game.hess_xy(point.0, point.1);
    let schur = symmetrized(&hxx.sub(&hxy.matmul(&inv).matmul(&hxy.transpose())));
    let schur_def = definiteness(&schur, tol);
    let verdict = if yy_def.is_nd() && schur_def.is_pd() {
        SecondOrderVerdict::SufficientStrictLocalMinimax
    } else if yy_def.is_nd() && schur_def.is_psd() {
        SecondOrderVerdict::NecessaryHolds
    } else {
        SecondOrderVerdict::NecessaryFails
    };
    Ok(SecondOrderReport {
        grad_norm,
        yy_definiteness: yy_def,
        schur_complement: Some(schur),
        schur_definiteness: Some(schur_def),
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SaddleCheck {
    pub verdict: Verdict,
    pub witness: Option<Vec<f64>>,
    pub detail: String,
}

/// Sampled test of the local saddle inequalities
/// `f(x*, y) ≤ f(x*, y*) ≤ f(x, y*)` over balls of the given radius.
pub fn local_saddle_check(
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
    radius: f64,
    tol: f64,
) -> SaddleCheck {
    let (x_star, y_star) = point;
    let base = game.value(x_star, y_star);
    let tol_abs = tol * (1.0 + base.abs());
    let samples = 256;
    for y in ball(y_star, radius, samples) {
        let v = game.value(x_star, &y);
        if v > base + tol_abs {
            return SaddleCheck {
                verdict: Verdict::No,
                witness: Some(y),
                detail: "max-player improves at fixed x*".into(),
            };
        }
    }
    for x in ball(x_star, radius, samples) {
        let v = game.value(&x, y_star);
        if v < base - tol_abs {
            return SaddleCheck {
                verdict: Verdict::No,
                witness: Some(x),
                detail: "min-player improves at fixed y*".into(),
            };
        }
    }
    SaddleCheck {
        verdict: Verdict::Yes,
        witness: None,
        detail: format!("saddle inequalities hold on sampled balls of radius {radius}"),
    }
}

fn ball(center: &[f64], radius: f64, count: usize) -> Vec<Vec<f64>> {
    match center.len() {
        1 => {
            let per_side = count / 2;
            (1..=per_side)
                .flat_map(|k| {
                    let off = radius * k as f64 / per_side as f64;
                    [vec![center[0] + off], vec![center[0] - off]]
                })
                .collect()
        }
        2 => {
            let rings = 8;
            let angles = count / rings;
            (1..=rings)
                .flat_map(|ri| {
                    let r = radius * ri as f64 / rings as f64;
                    (0..angles)
                        .map(move |ai| {
                            let th = 2.0 * std::f64::consts::PI * ai as f64 / angles as f64;
                            vec![center[0] + r * th.cos(), center[1] + r * th.sin()]
                        })
                        .collect::<Vec<_>>()
                })
                .collect()
        }
        n => {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
            (0..count)
                .map(|_| {
                    let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0_f64..1.0)).collect();
                    let d = norm(&dir).max(1e-12);
                    let r = radius * rng.gen_range(0.05..1.0_f64);
                    center.iter().zip(&dir).map(|(c, v)| c + r * v / d).collect()
                })
                .collect()
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn symmetrized(m: &Mat) -> SymMat {
    let mut s = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            s[(i, j)] = 0.5 * (m[(i, j)] + m[(j, i)]);
        }
    }
    SymMat::new(s).expect("Hessian blocks are symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{verify_local_minimax, EnvelopeCfg, Verdict};
    use crate::fixtures::fixture;
    use crate::linalg::EIG_TOL;
    use crate::oracle::MirroredGame;
    use crate::quadratic::QuadraticGame;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn first_order_examples() {
        let nls = fixture("no_local_saddle").unwrap();
        assert!(first_order_check(nls.oracle.as_ref(), (&[0.0], &[0.0]), 1e-9).stationary);

        let sgn = fixture("stationary_global_no_local").unwrap();
        assert!(first_order_check(sgn.oracle.as_ref(), (&[0.0], &[0.0]), 1e-9).stationary);
        assert!(!first_order_check(sgn.oracle.as_ref(), (&[1.0], &[0.0]), 1e-9).stationary);
        assert!(!first_order_check(sgn.oracle.as_ref(), (&[-1.0], &[0.0]), 1e-9).stationary);

        let lng = fixture("local_non_global").unwrap();
        let x = 1.0 / 3.0_f64.sqrt();
        assert!(first_order_check(lng.oracle.as_ref(), (&[x], &[0.0]), 1e-9).stationary);
    }

    #[test]
    fn second_order_examples() {
        let sgn = fixture("stationary_global_no_local").unwrap();
        let r = second_order_invertible(sgn.oracle.as_ref(), (&[0.0], &[0.0]), EIG_TOL).unwrap();
        assert_eq!(r.verdict, SecondOrderVerdict::NecessaryFails, "yy curvature is +1");

        let lng = fixture("local_non_global").unwrap();
        let x = 1.0 / 3.0_f64.sqrt();
        let r = second_order_invertible(lng.oracle.as_ref(), (&[x], &[0.0]), EIG_TOL).unwrap();
        assert_eq!(r.verdict, SecondOrderVerdict::SufficientStrictLocalMinimax);
        let schur = r.schur_complement.unwrap();
        assert!((schur[(0, 0)] - 2.0 * 3.0_f64.sqrt()).abs() < 1e-12);

        let nls = fixture("no_local_saddle").unwrap();
        let r = second_order_invertible(nls.oracle.as_ref(), (&[0.0], &[0.0]), EIG_TOL).unwrap();
        assert_eq!(r.verdict, SecondOrderVerdict::DegenerateYY);
        assert!(r.schur_complement.is_none());

        let err = second_order_invertible(sgn.oracle.as_ref(), (&[1.0], &[0.0]), EIG_TOL).unwrap_err();
        assert!(matches!(err, OptimalityError::NotStationary(_)));
    }

    #[test]
    fn local_saddle_examples() {
        let bl = fixture("bilinear").unwrap();
        assert_eq!(local_saddle_check(bl.oracle.as_ref(), (&[0.0], &[0.0]), 0.3, 1e-9).verdict, Verdict::Yes);

        let nls = fixture("no_local_saddle").unwrap();
        let check = local_saddle_check(nls.oracle.as_ref(), (&[0.0], &[0.0]), 0.3, 1e-9);
        assert_eq!(check.verdict, Verdict::No);
        assert!(check.witness.unwrap()[0].abs() > 0.0, "witness is an x with q(x,0) < q(0,0)");

        let glp = fixture("glp").unwrap();
        assert_eq!(local_saddle_check(glp.oracle.as_ref(), (&[0.0], &[0.0]), 0.3, 1e-9).verdict, Verdict::No);
    }

    #[test]
    fn sufficient_condition_agrees_with_envelope_verification() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let cfg = EnvelopeCfg::default();
        let mut checked = 0;
        while checked < 100 {
            let b = -rng.gen_range(0.5..3.0);
            let c = rng.gen_range(-2.0..2.0);
            // force a positive Schur complement a - c²/b > 0
            let a = c * c / b + rng.gen_range(0.3..3.0);
            let g = QuadraticGame::one_dim(a, b, c);
            let r = second_order_invertible(&g, (&[0.0], &[0.0]), EIG_TOL).unwrap();
            assert_eq!(r.verdict, SecondOrderVerdict::SufficientStrictLocalMinimax);
            let v = verify_local_minimax(&g, (&[0.0], &[0.0]), &[0.1, 0.05], 0.02, &cfg).unwrap();
            assert_eq!(v.verdict, Verdict::Yes, "a={a} b={b} c={c}: {:?}", v.evidence);
            checked += 1;
        }
    }

    #[test]
    fn saddle_implies_minimax_and_maximin() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let cfg = EnvelopeCfg::default();
        for _ in 0..20 {
            // A ⪰ 0 ⪰ B with coupling: guaranteed saddle at the origin
            let a = rng.gen_range(0.2..2.0);
            let b = -rng.gen_range(0.2..2.0);
            let c = rng.gen_range(-1.5..1.5);
            let g = QuadraticGame::one_dim(a, b, c);
            let saddle = local_saddle_check(&g, (&[0.0], &[0.0]), 0.2, 1e-9);
            assert_eq!(saddle.verdict, Verdict::Yes);
            let mm = verify_local_minimax(&g, (&[0.0], &[0.0]), &[0.1, 0.05], 0.02, &cfg).unwrap();
            assert_eq!(mm.verdict, Verdict::Yes);
            let mirrored = MirroredGame::new(&g);
            let mx = verify_local_minimax(&mirrored, (&[0.0], &[0.0]), &[0.1, 0.05], 0.02, &cfg).unwrap();
            assert_eq!(mx.verdict, Verdict::Yes, "maximin through the mirror");
        }
    }

    #[test]
    fn report_symmetry_under_role_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..40 {
            let a = rng.gen_range(-2.0..2.0);
            let b = rng.gen_range(-2.0..2.0);
            let c = rng.gen_range(-2.0..2.0);
            let g = QuadraticGame::one_dim(a, b, c);
            let mirrored = MirroredGame::new(&g);
            let direct = second_order_invertible(&g, (&[0.0], &[0.0]), EIG_TOL);
            let swapped = second_order_invertible(&mirrored, (&[0.0], &[0.0]), EIG_TOL);
            match (direct, swapped) {
                (Ok(d), Ok(s)) => {
                    // minimax sufficiency for the mirror is maximin sufficiency
                    // for the original: the yy block of the mirror is -A
                    let want = definiteness(&SymMat::diag(&[-a]), EIG_TOL);
                    assert_eq!(s.yy_definiteness, want);
                    let _ = d;
                }
                _ => panic!("origin is stationary for homogeneous games"),
            }
        }
    }
}
