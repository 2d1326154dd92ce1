//! Registry of analytic example games, keyed by string id. Each entry
//! carries a reference point where the interesting behavior happens.

use crate::linalg::{Mat, SymMat};
use crate::oracle::{ClosureGame, SmoothGame};
use crate::quadratic::QuadraticGame;

pub struct Fixture {
    pub id: &'static str,
    pub description: &'static str,
    pub oracle: Box<dyn SmoothGame>,
    /// Quadratic form when the payoff is a quadratic game.
    pub quadratic: Option<QuadraticGame>,
    pub point: (Vec<f64>, Vec<f64>),
}

pub fn fixture_ids() -> Vec<&'static str> {
    vec![
        "bilinear",
        "no_local_saddle",
        "glp",
        "glp_nbhr",
        "failure_lrp",
        "onedq",
        "nc",
        "glbstatl",
        "stationary_global_no_local",
        "local_non_global",
        "rem_critical",
        "counter_jin",
        "higher_order",
        "stronger_suff_cond",
        "kawa_suff",
        "lrp_eps0",
    ]
}

pub fn fixture(id: &str) -> Option<Fixture> {
    let canonical = match id {
        "xy" => "bilinear",
        "x3y" => "glbstatl",
        other => other,
    };
    let fx = match canonical {
        "bilinear" => quadratic_fixture(
            "bilinear",
            "f = xy; unique global saddle at the origin, GDA circles it",
            QuadraticGame::one_dim(0.0, 0.0, 1.0),
            (vec![0.0], vec![0.0]),
        ),
        "no_local_saddle" => quadratic_fixture(
            "no_local_saddle",
            "q = -x^2 + xy; local and global minimax at the origin but not local saddle",
            QuadraticGame::one_dim(-2.0, 0.0, 1.0),
            (vec![0.0], vec![0.0]),
        ),
        "glp" => quadratic_fixture(
            "glp",
            "q = -x^2 + xy + y^2; a local robust point that is neither local minimax nor maximin",
            QuadraticGame::one_dim(-2.0, 2.0, 1.0),
            (vec![0.0], vec![0.0]),
        ),
        "glp_nbhr" => quadratic_fixture(
            "glp_nbhr",
            "2d quadratic whose robust-point verdict depends on the neighborhood shape",
            QuadraticGame::homogeneous(
                SymMat::diag(&[0.0, -2.0]),
                SymMat::diag(&[2.0, 0.0]),
                Mat::identity(2),
            )
            .unwrap(),
            (vec![0.0, 0.0], vec![0.0, 0.0]),
        ),
        "failure_lrp" => quadratic_fixture(
            "failure_lrp",
            "q = -x1^2 + x1 y1 + x2 y2 + y2^2; robust point no gradient algorithm reaches",
            QuadraticGame::homogeneous(
                SymMat::diag(&[-2.0, 0.0]),
                SymMat::diag(&[0.0, 2.0]),
                Mat::identity(2),
            )
            .unwrap(),
            (vec![0.0, 0.0], vec![0.0, 0.0]),
        ),
        "onedq" => quadratic_fixture(
            "onedq",
            "f = -x^2 - y^2 + 2xy; global minimax points only, no maximin or saddle",
            QuadraticGame::one_dim(-2.0, -2.0, 2.0),
            (vec![0.0], vec![0.0]),
        ),
        "nc" => Fixture {
            id: "nc",
            description: "f = x^4/4 - x^2/2 + xy; minimax and maximin both exist, no saddle",
            oracle: Box::new(ClosureGame {
                label: "nc".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| x[0].powi(4) / 4.0 - x[0] * x[0] / 2.0 + x[0] * y[0]),
                gx: Box::new(|x, y| vec![x[0].powi(3) - x[0] + y[0]]),
                gy: Box::new(|x, _| vec![x[0]]),
                hxx: Box::new(|x, _| mat1(3.0 * x[0] * x[0] - 1.0)),
                hxy: Box::new(|_, _| mat1(1.0)),
                hyy: Box::new(|_, _| mat1(0.0)),
            }),
            quadratic: None,
            point: (vec![0.0], vec![0.0]),
        },
        "glbstatl" => Fixture {
            id: "glbstatl",
            description: "f = x^3 y; stationary and global minimax at (0,1) yet not local minimax",
            oracle: Box::new(ClosureGame {
                label: "glbstatl".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| x[0].powi(3) * y[0]),
                gx: Box::new(|x, y| vec![3.0 * x[0] * x[0] * y[0]]),
                gy: Box::new(|x, _| vec![x[0].powi(3)]),
                hxx: Box::new(|x, y| mat1(6.0 * x[0] * y[0])),
                hxy: Box::new(|x, _| mat1(3.0 * x[0] * x[0])),
                hyy: Box::new(|_, _| mat1(0.0)),
            }),
            quadratic: None,
            point: (vec![0.0], vec![1.0]),
        },
        "stationary_global_no_local" => Fixture {
            id: "stationary_global_no_local",
            description: "f = -y^4/4 + y^2/2 - xy; global minimax exists, no local minimax",
            oracle: Box::new(ClosureGame {
                label: "stationary_global_no_local".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| -y[0].powi(4) / 4.0 + y[0] * y[0] / 2.0 - x[0] * y[0]),
                gx: Box::new(|_, y| vec![-y[0]]),
                gy: Box::new(|x, y| vec![-y[0].powi(3) + y[0] - x[0]]),
                hxx: Box::new(|_, _| mat1(0.0)),
                hxy: Box::new(|_, _| mat1(-1.0)),
                hyy: Box::new(|_, y| mat1(-3.0 * y[0] * y[0] + 1.0)),
            }),
            quadratic: None,
            point: (vec![0.0], vec![0.0]),
        },
        "local_non_global" => Fixture {
            id: "local_non_global",
            description: "f = x^3 - x - y^2; strict local minimax at (1/sqrt(3), 0), no global one",
            oracle: Box::new(ClosureGame {
                label: "local_non_global".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| x[0].powi(3) - x[0] - y[0] * y[0]),
                gx: Box::new(|x, _| vec![3.0 * x[0] * x[0] - 1.0]),
                gy: Box::new(|_, y| vec![-2.0 * y[0]]),
                hxx: Box::new(|x, _| mat1(6.0 * x[0])),
                hxy: Box::new(|_, _| mat1(0.0)),
                hyy: Box::new(|_, _| mat1(-2.0)),
            }),
            quadratic: None,
            point: (vec![1.0 / 3.0_f64.sqrt()], vec![0.0]),
        },
        "rem_critical" => Fixture {
            id: "rem_critical",
            description: "f = -x^2 + x y^3; second-order test saved by non-critical directions",
            oracle: Box::new(ClosureGame {
                label: "rem_critical".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| -x[0] * x[0] + x[0] * y[0].powi(3)),
                gx: Box::new(|x, y| vec![-2.0 * x[0] + y[0].powi(3)]),
                gy: Box::new(|x, y| vec![3.0 * x[0] * y[0] * y[0]]),
                hxx: Box::new(|_, _| mat1(-2.0)),
                hxy: Box::new(|_, y| mat1(3.0 * y[0] * y[0])),
                hyy: Box::new(|x, y| mat1(6.0 * x[0] * y[0])),
            }),
            quadratic: None,
            point: (vec![0.0], vec![0.0]),
        },
        "counter_jin" => Fixture {
            id: "counter_jin",
            description: "f = -x2^2 + x2 y2^3 - (y1+y2)^2 + 2 x1 (y1+y2); critical directions have t2 = 0",
            oracle: Box::new(ClosureGame {
                label: "counter_jin".into(),
                nx: 2,
                ny: 2,
                f: Box::new(|x, y| {
                    let s = y[0] + y[1];
                    -x[1] * x[1] + x[1] * y[1].powi(3) - s * s + 2.0 * x[0] * s
                }),
                gx: Box::new(|x, y| {
                    let s = y[0] + y[1];
                    vec![2.0 * s, -2.0 * x[1] + y[1].powi(3)]
                }),
                gy: Box::new(|x, y| {
                    let s = y[0] + y[1];
                    let common = -2.0 * s + 2.0 * x[0];
                    vec![common, 3.0 * x[1] * y[1] * y[1] + common]
                }),
                hxx: Box::new(|_, _| {
                    Mat::from_rows(&[vec![0.0, 0.0], vec![0.0, -2.0]]).unwrap()
                }),
                hxy: Box::new(|_, y| {
                    Mat::from_rows(&[vec![2.0, 2.0], vec![0.0, 3.0 * y[1] * y[1]]]).unwrap()
                }),
                hyy: Box::new(|x, y| {
                    Mat::from_rows(&[
                        vec![-2.0, -2.0],
                        vec![-2.0, 6.0 * x[1] * y[1] - 2.0],
                    ])
                    .unwrap()
                }),
            }),
            quadratic: None,
            point: (vec![0.0, 0.0], vec![0.0, 0.0]),
        },
        "higher_order" => Fixture {
            id: "higher_order",
            description: "f = -x^2 - y^4 + 4xy^2; the curvature test needs fourth-order terms",
            oracle: Box::new(ClosureGame {
                label: "higher_order".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| -x[0] * x[0] - y[0].powi(4) + 4.0 * x[0] * y[0] * y[0]),
                gx: Box::new(|x, y| vec![-2.0 * x[0] + 4.0 * y[0] * y[0]]),
                gy: Box::new(|x, y| vec![-4.0 * y[0].powi(3) + 8.0 * x[0] * y[0]]),
                hxx: Box::new(|_, _| mat1(-2.0)),
                hxy: Box::new(|_, y| mat1(8.0 * y[0])),
                hyy: Box::new(|x, y| mat1(-12.0 * y[0] * y[0] + 8.0 * x[0])),
            }),
            quadratic: None,
            point: (vec![0.0], vec![0.0]),
        },
        "stronger_suff_cond" => Fixture {
            id: "stronger_suff_cond",
            description: "f = x y^2 + x^2; local minimax at the origin with singular yy-curvature",
            oracle: Box::new(ClosureGame {
                label: "stronger_suff_cond".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| x[0] * y[0] * y[0] + x[0] * x[0]),
                gx: Box::new(|x, y| vec![y[0] * y[0] + 2.0 * x[0]]),
                gy: Box::new(|x, y| vec![2.0 * x[0] * y[0]]),
                hxx: Box::new(|_, _| mat1(2.0)),
                hxy: Box::new(|_, y| mat1(2.0 * y[0])),
                hyy: Box::new(|x, _| mat1(2.0 * x[0])),
            }),
            quadratic: None,
            point: (vec![0.0], vec![0.0]),
        },
        "kawa_suff" => Fixture {
            id: "kawa_suff",
            description: "f = x y^3 - y^6; local minimax certified only through envelope growth",
            oracle: Box::new(ClosureGame {
                label: "kawa_suff".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| x[0] * y[0].powi(3) - y[0].powi(6)),
                gx: Box::new(|_, y| vec![y[0].powi(3)]),
                gy: Box::new(|x, y| vec![3.0 * x[0] * y[0] * y[0] - 6.0 * y[0].powi(5)]),
                hxx: Box::new(|_, _| mat1(0.0)),
                hxy: Box::new(|_, y| mat1(3.0 * y[0] * y[0])),
                hyy: Box::new(|x, y| mat1(6.0 * x[0] * y[0] - 30.0 * y[0].powi(4))),
            }),
            quadratic: None,
            point: (vec![0.0], vec![0.0]),
        },
        "lrp_eps0" => Fixture {
            id: "lrp_eps0",
            description: "f = x y^3 - x^2/(1+y^2); robust point needing the zero-radius member",
            oracle: Box::new(ClosureGame {
                label: "lrp_eps0".into(),
                nx: 1,
                ny: 1,
                f: Box::new(|x, y| {
                    let d = 1.0 + y[0] * y[0];
                    x[0] * y[0].powi(3) - x[0] * x[0] / d
                }),
                gx: Box::new(|x, y| {
                    let d = 1.0 + y[0] * y[0];
                    vec![y[0].powi(3) - 2.0 * x[0] / d]
                }),
                gy: Box::new(|x, y| {
                    let d = 1.0 + y[0] * y[0];
                    vec![3.0 * x[0] * y[0] * y[0] + 2.0 * x[0] * x[0] * y[0] / (d * d)]
                }),
                hxx: Box::new(|_, y| {
                    let d = 1.0 + y[0] * y[0];
                    mat1(-2.0 / d)
                }),
                hxy: Box::new(|x, y| {
                    let d = 1.0 + y[0] * y[0];
                    mat1(3.0 * y[0] * y[0] + 4.0 * x[0] * y[0] / (d * d))
                }),
                hyy: Box::new(|x, y| {
                    let d = 1.0 + y[0] * y[0];
                    mat1(6.0 * x[0] * y[0] + 2.0 * x[0] * x[0] * (1.0 - 3.0 * y[0] * y[0]) / d.powi(3))
                }),
            }),
            quadratic: None,
            point: (vec![0.0], vec![0.0]),
        },
        _ => return None,
    };
    Some(fx)
}

fn quadratic_fixture(
    id: &'static str,
    description: &'static str,
    game: QuadraticGame,
    point: (Vec<f64>, Vec<f64>),
) -> Fixture {
    Fixture {
        id,
        description,
        oracle: Box::new(game.clone()),
        quadratic: Some(game),
        point,
    }
}

fn mat1(v: f64) -> Mat {
    Mat::new(1, 1, vec![v]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{gradient_fd_error, hessian_fd_error};

    #[test]
    fn every_fixture_passes_derivative_self_checks() {
        for id in fixture_ids() {
            let fx = fixture(id).unwrap();
            let ge = gradient_fd_error(fx.oracle.as_ref(), 100, 0.9, 42);
            assert!(ge < 1e-5, "{id}: gradient fd error {ge}");
            let he = hessian_fd_error(fx.oracle.as_ref(), 100, 0.9, 43);
            assert!(he < 1e-5, "{id}: hessian fd error {he}");
        }
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(fixture("xy").unwrap().id, "bilinear");
        assert_eq!(fixture("x3y").unwrap().id, "glbstatl");
        assert!(fixture("unknown").is_none());
    }

    #[test]
    fn fixture_points_are_stationary_where_expected() {
        for id in ["bilinear", "no_local_saddle", "glp", "failure_lrp", "local_non_global", "higher_order"] {
            let fx = fixture(id).unwrap();
            let gx = fx.oracle.grad_x(&fx.point.0, &fx.point.1);
            let gy = fx.oracle.grad_y(&fx.point.0, &fx.point.1);
            let norm: f64 = gx.iter().chain(&gy).map(|v| v * v).sum::<f64>().sqrt();
            assert!(norm < 1e-9, "{id} reference point should be stationary, |g| = {norm}");
        }
    }
}
