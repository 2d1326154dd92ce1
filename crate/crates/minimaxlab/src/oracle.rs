//! Twice-differentiable payoff oracles: the evaluation contract shared by
//! the numeric verification, dynamics and stability modules, plus mirroring
//! and finite-difference self-checks.

use crate::linalg::Mat;
use crate::quadratic::QuadraticGame;

/// A smooth zero-sum payoff `f(x, y)` with analytic first and second
/// derivatives. Implementations must be safe to evaluate from multiple
/// threads; evaluation is stateless.
pub trait SmoothGame: Send + Sync {
    fn nx(&self) -> usize;
    fn ny(&self) -> usize;
    fn value(&self, x: &[f64], y: &[f64]) -> f64;
    fn grad_x(&self, x: &[f64], y: &[f64]) -> Vec<f64>;
    fn grad_y(&self, x: &[f64], y: &[f64]) -> Vec<f64>;
    fn hess_xx(&self, x: &[f64], y: &[f64]) -> Mat;
    /// Mixed block ∂²f/∂x∂y with shape nx × ny; the yx block is its transpose.
    fn hess_xy(&self, x: &[f64], y: &[f64]) -> Mat;
    fn hess_yy(&self, x: &[f64], y: &[f64]) -> Mat;
    fn label(&self) -> &str;
}

impl SmoothGame for QuadraticGame {
    fn nx(&self) -> usize {
        self.n()
    }

    fn ny(&self) -> usize {
        self.m()
    }

    fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        self.eval(x, y).expect("dimension-checked evaluation")
    }

    fn grad_x(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.grad(x, y).expect("dimension-checked evaluation").0
    }

    fn grad_y(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.grad(x, y).expect("dimension-checked evaluation").1
    }

    fn hess_xx(&self, _x: &[f64], _y: &[f64]) -> Mat {
        self.a_mat.mat().clone()
    }

    fn hess_xy(&self, _x: &[f64], _y: &[f64]) -> Mat {
        self.c_mat.clone()
    }

    fn hess_yy(&self, _x: &[f64], _y: &[f64]) -> Mat {
        self.b_mat.mat().clone()
    }

    fn label(&self) -> &str {
        "quadratic"
    }
}

type ValueFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;
type VecFn = dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync;
type MatFn = dyn Fn(&[f64], &[f64]) -> Mat + Send + Sync;

/// Closure-backed oracle for the analytic fixtures.
pub struct ClosureGame {
    pub label: String,
    pub nx: usize,
    pub ny: usize,
    pub f: Box<ValueFn>,
    pub gx: Box<VecFn>,
    pub gy: Box<VecFn>,
    pub hxx: Box<MatFn>,
    pub hxy: Box<MatFn>,
    pub hyy: Box<MatFn>,
}

impl SmoothGame for ClosureGame {
    fn nx(&self) -> usize {
        self.nx
    }

    fn ny(&self) -> usize {
        self.ny
    }

    fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        (self.f)(x, y)
    }

    fn grad_x(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        (self.gx)(x, y)
    }

    fn grad_y(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        (self.gy)(x, y)
    }

    fn hess_xx(&self, x: &[f64], y: &[f64]) -> Mat {
        (self.hxx)(x, y)
    }

    fn hess_xy(&self, x: &[f64], y: &[f64]) -> Mat {
        (self.hxy)(x, y)
    }

    fn hess_yy(&self, x: &[f64], y: &[f64]) -> Mat {
        (self.hyy)(x, y)
    }

    fn label(&self) -> &str {
        &self.label
    }
}

/// View of the game from the opponent's side: `g(u, v) = −f(v, u)`, so the
/// maximin analysis of `f` is the minimax analysis of its mirror.
pub struct MirroredGame<'a> {
    inner: &'a dyn SmoothGame,
    label: String,
}

impl<'a> MirroredGame<'a> {
    pub fn new(inner: &'a dyn SmoothGame) -> Self {
        let label = format!("mirror({})", inner.label());
        Self { inner, label }
    }
}

impl SmoothGame for MirroredGame<'_> {
    fn nx(&self) -> usize {
        self.inner.ny()
    }

    fn ny(&self) -> usize {
        self.inner.nx()
    }

    fn value(&self, u: &[f64], v: &[f64]) -> f64 {
        -self.inner.value(v, u)
    }

    fn grad_x(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        self.inner.grad_y(v, u).iter().map(|g| -g).collect()
    }

    fn grad_y(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        self.inner.grad_x(v, u).iter().map(|g| -g).collect()
    }

    fn hess_xx(&self, u: &[f64], v: &[f64]) -> Mat {
        self.inner.hess_yy(v, u).neg()
    }

    fn hess_xy(&self, u: &[f64], v: &[f64]) -> Mat {
        self.inner.hess_xy(v, u).transpose().neg()
    }

    fn hess_yy(&self, u: &[f64], v: &[f64]) -> Mat {
        self.inner.hess_xx(v, u).neg()
    }

    fn label(&self) -> &str {
        &self.label
    }
}

/// Worst relative error of the analytic gradients against central finite
/// differences of `f` over `probes` random points in `[-range, range]`.
pub fn gradient_fd_error(game: &dyn SmoothGame, probes: usize, range: f64, seed: u64) -> f64 {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let x: Vec<f64> = (0..game.nx()).map(|_| rng.gen_range(-range..range)).collect();
        let y: Vec<f64> = (0..game.ny()).map(|_| rng.gen_range(-range..range)).collect();
        let gx = game.grad_x(&x, &y);
        let gy = game.grad_y(&x, &y);
        let scale = 1.0 + gx.iter().chain(&gy).fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..game.nx() {
            let mut xp = x.clone();
            xp[i] += h;
            let mut xm = x.clone();
            xm[i] -= h;
            let fd = (game.value(&xp, &y) - game.value(&xm, &y)) / (2.0 * h);
            worst = worst.max((fd - gx[i]).abs() / scale);
        }
        for j in 0..game.ny() {
            let mut yp = y.clone();
            yp[j] += h;
            let mut ym = y.clone();
            ym[j] -= h;
            let fd = (game.value(&x, &yp) - game.value(&x, &ym)) / (2.0 * h);
            worst = worst.max((fd - gy[j]).abs() / scale);
        }
    }
    worst
}

/// Worst relative error of the analytic Hessian blocks against central
/// finite differences of the gradients.
pub fn hessian_fd_error(game: &dyn SmoothGame, probes: usize, range: f64, seed: u64) -> f64 {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let x: Vec<f64> = (0..game.nx()).map(|_| rng.gen_range(-range..range)).collect();
        let y: Vec<f64> = (0..game.ny()).map(|_| rng.gen_range(-range..range)).collect();
        let hxx = game.hess_xx(&x, &y);
        let hxy = game.hess_xy(&x, &y);
        let hyy = game.hess_yy(&x, &y);
        let scale = 1.0 + hxx.max_abs().max(hxy.max_abs()).max(hyy.max_abs());
        for j in 0..game.nx() {
            let mut xp = x.clone();
            xp[j] += h;
            let mut xm = x.clone();
            xm[j] -= h;
            let gp = game.grad_x(&xp, &y);
            let gm = game.grad_x(&xm, &y);
            for i in 0..game.nx() {
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                worst = worst.max((fd - hxx[(i, j)]).abs() / scale);
            }
            let gyp = game.grad_y(&xp, &y);
            let gym = game.grad_y(&xm, &y);
            for i in 0..game.ny() {
                let fd = (gyp[i] - gym[i]) / (2.0 * h);
                worst = worst.max((fd - hxy[(j, i)]).abs() / scale);
            }
        }
        for j in 0..game.ny() {
            let mut yp = y.clone();
            yp[j] += h;
            let mut ym = y.clone();
            ym[j] -= h;
            let gp = game.grad_y(&x, &yp);
            let gm = game.grad_y(&x, &ym);
            for i in 0..game.ny() {
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                worst = worst.max((fd - hyy[(i, j)]).abs() / scale);
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymMat;

    #[test]
    fn quadratic_game_implements_oracle() {
        let g = QuadraticGame::one_dim(-2.0, 0.0, 1.0);
        assert_eq!(g.value(&[1.0], &[1.0]), 0.0);
        assert_eq!(g.grad_x(&[1.0], &[1.0]), vec![-1.0]);
        assert_eq!(g.hess_xx(&[0.0], &[0.0])[(0, 0)], -2.0);
        assert!(gradient_fd_error(&g, 50, 1.0, 1) < 1e-6);
        assert!(hessian_fd_error(&g, 50, 1.0, 2) < 1e-6);
    }

    #[test]
    fn mirrored_game_negates_and_swaps() {
        let g = QuadraticGame::new(
            SymMat::diag(&[-2.0]),
            SymMat::diag(&[2.0]),
            Mat::new(1, 1, vec![1.0]).unwrap(),
            vec![0.0],
            vec![0.0],
            0.0,
        )
        .unwrap();
        let m = MirroredGame::new(&g);
        assert_eq!(m.value(&[0.3], &[0.7]), -g.value(&[0.7], &[0.3]));
        assert_eq!(m.hess_xx(&[0.0], &[0.0])[(0, 0)], -2.0);
        assert_eq!(m.hess_yy(&[0.0], &[0.0])[(0, 0)], 2.0);
        assert!(gradient_fd_error(&m, 50, 1.0, 3) < 1e-6);
    }
}
