//! Numeric local envelope machinery for general smooth oracles at desk
//! scale: inner maximization over a neighborhood, active sets, Danskin
//! directional derivatives, critical directions, the second-order necessary
//! term, and direct verification of the local-minimax / local-robust-point
//! definitions.

use crate::linalg::{sym_eig, SymMat};
use crate::oracle::{MirroredGame, SmoothGame};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EnvelopeError {
    #[error("inner maximization over {0} dimensions is not supported")]
    UnsupportedDim(usize),
    #[error("reference point is not a local maximizer of the inner problem")]
    NotLocalMax,
}

#[derive(Debug, Clone)]
pub enum NbhdShape {
    L2Ball,
    LInfBall,
    /// Box neighborhood aligned with the eigenvectors of a reference matrix.
    Eigenspace(SymMat),
}

#[derive(Debug, Clone)]
pub struct Neighborhood {
    pub center: Vec<f64>,
    pub radius: f64,
    pub shape: NbhdShape,
}

impl Neighborhood {
    pub fn linf(center: Vec<f64>, radius: f64) -> Self {
        Self { center, radius, shape: NbhdShape::LInfBall }
    }

    pub fn l2(center: Vec<f64>, radius: f64) -> Self {
        Self { center, radius, shape: NbhdShape::L2Ball }
    }

    pub fn eigenspace(center: Vec<f64>, radius: f64, reference: SymMat) -> Self {
        Self { center, radius, shape: NbhdShape::Eigenspace(reference) }
    }

    fn project(&self, y: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = y.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        match &self.shape {
            NbhdShape::L2Ball => {
                let n = norm(&d);
                if n <= self.radius || n == 0.0 {
                    y.to_vec()
                } else {
                    self.center
                        .iter()
                        .zip(&d)
                        .map(|(c, v)| c + v * self.radius / n)
                        .collect()
                }
            }
            NbhdShape::LInfBall => self
                .center
                .iter()
                .zip(&d)
                .map(|(c, v)| c + v.clamp(-self.radius, self.radius))
                .collect(),
            NbhdShape::Eigenspace(s) => {
                let u = sym_eig(s).eigenvectors;
                let mut w = vec![0.0; d.len()];
                for i in 0..d.len() {
                    for k in 0..d.len() {
                        w[i] += u[(k, i)] * d[k];
                    }
                }
                for wi in w.iter_mut() {
                    *wi = wi.clamp(-self.radius, self.radius);
                }
                let mut out = self.center.clone();
                for k in 0..d.len() {
                    for i in 0..d.len() {
                        out[k] += u[(k, i)] * w[i];
                    }
                }
                out
            }
        }
    }

    /// Dense sample of the neighborhood, endpoints included.
    fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let m = self.center.len();
        let r = self.radius;
        match m {
            1 => linspace(-r, r, per_axis)
                .into_iter()
                .map(|w| vec![self.center[0] + w])
                .collect(),
            2 => {
                let axis = linspace(-r, r, per_axis);
                let mut pts = Vec::with_capacity(per_axis * per_axis + 64);
                let frame = match &self.shape {
                    NbhdShape::Eigenspace(s) => Some(sym_eig(s).eigenvectors),
                    _ => None,
                };
                for a in &axis {
                    for b in &axis {
                        let p = match (&self.shape, &frame) {
                            (NbhdShape::Eigenspace(_), Some(u)) => vec![
                                self.center[0] + u[(0, 0)] * a + u[(0, 1)] * b,
                                self.center[1] + u[(1, 0)] * a + u[(1, 1)] * b,
                            ],
                            _ => vec![self.center[0] + a, self.center[1] + b],
                        };
                        if matches!(self.shape, NbhdShape::L2Ball)
                            && (a * a + b * b).sqrt() > r
                        {
                            continue;
                        }
                        pts.push(p);
                    }
                }
                if matches!(self.shape, NbhdShape::L2Ball) {
                    for k in 0..64 {
                        let th = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
                        pts.push(vec![
                            self.center[0] + r * th.cos(),
                            self.center[1] + r * th.sin(),
                        ]);
                    }
                }
                pts
            }
            other => panic!("grid sampling unsupported for dimension {other}"),
        }
    }
}

/// Tuning knobs for the inner maximization and the verification sampling.
#[derive(Debug, Clone)]
pub struct EnvelopeCfg {
    pub grid_1d: usize,
    pub grid_2d: usize,
    pub ascent_steps: usize,
    pub ascent_restarts: usize,
    pub ascent_step_frac: f64,
    /// Relative tolerance for membership in the active set.
    pub active_tol: f64,
    /// Relative tolerance on envelope comparisons in the verifiers.
    pub value_tol: f64,
    /// Relative tolerance for the inner local-maximizer test.
    pub local_max_tol: f64,
    pub local_max_samples: usize,
    pub x_samples: usize,
    pub window_levels: usize,
    pub window_divisor: f64,
    /// Default radius of the own-variable ball in the robust-point tests.
    pub lrp_x_radius: f64,
    pub shell_count: usize,
    pub shell_angles: usize,
    pub shell_scale: f64,
}

impl Default for EnvelopeCfg {
    fn default() -> Self {
        Self {
            grid_1d: 401,
            grid_2d: 101,
            ascent_steps: 50,
            ascent_restarts: 8,
            ascent_step_frac: 0.1,
            active_tol: 1e-9,
            value_tol: 1e-14,
            local_max_tol: 1e-9,
            local_max_samples: 256,
            x_samples: 48,
            window_levels: 5,
            window_divisor: 6.0,
            lrp_x_radius: 0.05,
            shell_count: 6,
            shell_angles: 64,
            shell_scale: 1.0,
        }
    }
}

/// `max_{y ∈ nbhd} f(x, y)` by dense grid plus projected gradient ascent.
/// The result never exceeds the true maximum (all evaluations are feasible),
/// and for the smooth fixtures it matches it to solver accuracy.
pub fn local_envelope(
    game: &dyn SmoothGame,
    x: &[f64],
    nbhd: &Neighborhood,
    cfg: &EnvelopeCfg,
) -> Result<f64, EnvelopeError> {
    Ok(inner_max(game, x, nbhd, cfg)?.best_value)
}

struct InnerMax {
    best_value: f64,
    evaluated: Vec<(Vec<f64>, f64)>,
}

fn inner_max(
    game: &dyn SmoothGame,
    x: &[f64],
    nbhd: &Neighborhood,
    cfg: &EnvelopeCfg,
) -> Result<InnerMax, EnvelopeError> {
    let m = game.ny();
    if m > 2 {
        return Err(EnvelopeError::UnsupportedDim(m));
    }
    if nbhd.radius == 0.0 {
        let v = game.value(x, &nbhd.center);
        return Ok(InnerMax { best_value: v, evaluated: vec![(nbhd.center.clone(), v)] });
    }
    let per_axis = if m == 1 { cfg.grid_1d } else { cfg.grid_2d };
    let mut evaluated: Vec<(Vec<f64>, f64)> = nbhd
        .grid(per_axis)
        .into_iter()
        .map(|p| {
            let v = game.value(x, &p);
            (p, v)
        })
        .collect();
    let mut order: Vec<usize> = (0..evaluated.len()).collect();
    order.sort_by(|&i, &j| evaluated[j].1.partial_cmp(&evaluated[i].1).unwrap());
    let starts: Vec<Vec<f64>> = order
        .iter()
        .take(cfg.ascent_restarts)
        .map(|&i| evaluated[i].0.clone())
        .collect();
    for start in starts {
        let refined = ascend(game, x, start, nbhd, cfg);
        evaluated.push(refined);
    }
    if m == 1 {
        // bracket the best grid cell and polish by ternary search
        let (bi, _) = evaluated
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.1.partial_cmp(&b.1).unwrap())
            .map(|(i, p)| (i, p.1))
            .unwrap();
        let h = 2.0 * nbhd.radius / (per_axis - 1) as f64;
        let c = evaluated[bi].0[0];
        let (mut lo, mut hi) = (c - h, c + h);
        for _ in 0..90 {
            let l = lo + (hi - lo) / 3.0;
            let r = hi - (hi - lo) / 3.0;
            let pl = nbhd.project(&[l]);
            let pr = nbhd.project(&[r]);
            if game.value(x, &pl) < game.value(x, &pr) {
                lo = l;
            } else {
                hi = r;
            }
        }
        let p = nbhd.project(&[(lo + hi) / 2.0]);
        let v = game.value(x, &p);
        evaluated.push((p, v));
    }
    let best_value = evaluated
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(InnerMax { best_value, evaluated })
}

fn ascend(
    game: &dyn SmoothGame,
    x: &[f64],
    start: Vec<f64>,
    nbhd: &Neighborhood,
    cfg: &EnvelopeCfg,
) -> (Vec<f64>, f64) {
    let mut y = nbhd.project(&start);
    let mut fy = game.value(x, &y);
    let mut step = cfg.ascent_step_frac * nbhd.radius;
    for _ in 0..cfg.ascent_steps {
        let g = game.grad_y(x, &y);
        let gn = norm(&g);
        if gn < 1e-300 {
            break;
        }
        let cand: Vec<f64> = y.iter().zip(&g).map(|(yi, gi)| yi + step * gi / gn).collect();
        let cand = nbhd.project(&cand);
        let fc = game.value(x, &cand);
        if fc > fy {
            y = cand;
            fy = fc;
            step *= 1.3;
        } else {
            step *= 0.5;
            if step < 1e-16 * nbhd.radius {
                break;
            }
        }
    }
    (y, fy)
}

/// Points of the neighborhood attaining the envelope value within `tol`.
#[derive(Debug, Clone)]
pub struct ActiveSetSample {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub tol: f64,
}

pub fn active_set(
    game: &dyn SmoothGame,
    x_star: &[f64],
    nbhd: &Neighborhood,
    tol: f64,
    cfg: &EnvelopeCfg,
) -> Result<ActiveSetSample, EnvelopeError> {
    let inner = inner_max(game, x_star, nbhd, cfg)?;
    let cut = inner.best_value - tol * (1.0 + inner.best_value.abs());
    let dedup = if game.ny() == 1 {
        2.0 * nbhd.radius / cfg.grid_1d as f64
    } else {
        2.0 * nbhd.radius / cfg.grid_2d as f64
    };
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut values = Vec::new();
    for (p, v) in inner.evaluated {
        if v < cut {
            continue;
        }
        if points.iter().any(|q| dist(q, &p) < dedup) {
            continue;
        }
        points.push(p);
        values.push(v);
    }
    Ok(ActiveSetSample { points, values, tol })
}

/// Danskin directional derivative of the local envelope at `x_star` along
/// `t`: the maximum of `⟨∂ₓf(x*, y), t⟩` over the active set.
pub fn danskin_dd(
    game: &dyn SmoothGame,
    x_star: &[f64],
    nbhd: &Neighborhood,
    t: &[f64],
    cfg: &EnvelopeCfg,
) -> Result<f64, EnvelopeError> {
    let active = active_set(game, x_star, nbhd, cfg.active_tol, cfg)?;
    Ok(active
        .points
        .iter()
        .map(|y| dot(&game.grad_x(x_star, y), t))
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug)]
pub struct CriticalPartition {
    pub positive: Vec<Vec<f64>>,
    pub critical: Vec<Vec<f64>>,
    /// dd values indexed as [direction][epsilon].
    pub dd_table: Vec<Vec<f64>>,
    /// Whether dd was monotone non-decreasing in epsilon for every direction.
    pub monotone: bool,
}

/// Split unit directions into envelope-increasing and critical ones: a
/// direction is critical when its Danskin derivative stays below `tol` for
/// every radius in `eps_list`.
pub fn critical_directions(
    game: &dyn SmoothGame,
    x_star: &[f64],
    y_star: &[f64],
    eps_list: &[f64],
    directions: &[Vec<f64>],
    tol: f64,
    cfg: &EnvelopeCfg,
) -> Result<CriticalPartition, EnvelopeError> {
    let probe_radius = eps_list.iter().copied().fold(f64::INFINITY, f64::min);
    let check = local_max_violation(game, x_star, y_star, probe_radius, cfg);
    if check.improvement > 10.0 * check.tol {
        return Err(EnvelopeError::NotLocalMax);
    }
    let mut sorted_eps: Vec<f64> = eps_list.to_vec();
    sorted_eps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut positive = Vec::new();
    let mut critical = Vec::new();
    let mut dd_table = Vec::new();
    let mut monotone = true;
    for dir in directions {
        let n = norm(dir);
        let unit: Vec<f64> = dir.iter().map(|v| v / n).collect();
        let mut dds = Vec::new();
        for &eps in &sorted_eps {
            let nbhd = Neighborhood { center: y_star.to_vec(), radius: eps, shape: NbhdShape::LInfBall };
            dds.push(danskin_dd(game, x_star, &nbhd, &unit, cfg)?);
        }
        for w in dds.windows(2) {
            if w[1] < w[0] - tol {
                monotone = false;
            }
        }
        if dds.iter().all(|&d| d < tol) {
            critical.push(unit);
        } else {
            positive.push(unit);
        }
        dd_table.push(dds);
    }
    Ok(CriticalPartition { positive, critical, dd_table, monotone })
}

/// Left-hand side of the second-order necessary condition along `t`:
/// `tᵀ ∂²ₓₓf t + ½ limsup_{z→y*} [max{∂ₓf(x*,z)ᵀt, 0}]² (f(x*,y*) − f(x*,z))†`,
/// with the limsup approximated by the max over the two finest of
/// `shell_count` geometric shells around `y_star`.
pub fn second_order_necessary_term(
    game: &dyn SmoothGame,
    x_star: &[f64],
    y_star: &[f64],
    t: &[f64],
    cfg: &EnvelopeCfg,
) -> f64 {
    let hxx = game.hess_xx(x_star, y_star);
    let ht = hxx.matvec(t);
    let base = dot(t, &ht);
    let f_star = game.value(x_star, y_star);
    let m = game.ny();
    let mut shell_max = vec![f64::NEG_INFINITY; cfg.shell_count];
    for k in 0..cfg.shell_count {
        let r = cfg.shell_scale * 10f64.powi(-(k as i32 + 1));
        let points: Vec<Vec<f64>> = if m == 1 {
            vec![vec![y_star[0] + r], vec![y_star[0] - r]]
        } else {
            (0..cfg.shell_angles)
                .map(|a| {
                    let th = 2.0 * std::f64::consts::PI * a as f64 / cfg.shell_angles as f64;
                    let mut z = y_star.to_vec();
                    z[0] += r * th.cos();
                    z[1] += r * th.sin();
                    z
                })
                .collect()
        };
        for z in points {
            let g = dot(&game.grad_x(x_star, &z), t).max(0.0);
            let den = f_star - game.value(x_star, &z);
            let dagger = if den == 0.0 { 0.0 } else { 1.0 / den };
            shell_max[k] = shell_max[k].max(g * g * dagger);
        }
    }
    let finest = shell_max
        .iter()
        .rev()
        .take(2)
        .fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let limsup = if finest.is_finite() { finest.max(0.0) } else { 0.0 };
    base + 0.5 * limsup
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub detail: String,
}

struct MaxViolation {
    improvement: f64,
    witness: Vec<f64>,
    tol: f64,
}

/// Largest improvement of `f(x*, ·)` over `f(x*, y*)` found on a sampled
/// ball around `y_star`.
fn local_max_violation(
    game: &dyn SmoothGame,
    x_star: &[f64],
    y_star: &[f64],
    radius: f64,
    cfg: &EnvelopeCfg,
) -> MaxViolation {
    let base = game.value(x_star, y_star);
    let tol = cfg.local_max_tol * (1.0 + base.abs());
    let mut improvement: f64 = 0.0;
    let mut witness = y_star.to_vec();
    for p in ball_samples(y_star, radius, cfg.local_max_samples) {
        let v = game.value(x_star, &p) - base;
        if v > improvement {
            improvement = v;
            witness = p;
        }
    }
    MaxViolation { improvement, witness, tol }
}

enum WindowOutcome {
    Pass { window: f64 },
    Fail { witness: Vec<f64>, violation: f64 },
}

/// Check that `x_star` is a sampled local minimizer of the envelope
/// `x ↦ max_{y ∈ nbhd} f(x, y)`, trying progressively smaller windows (a
/// local minimizer only needs *some* neighborhood to work). Genuine local
/// minima hit an exactly-clean window; violations that merely shrink with
/// the window (higher-order counterexamples) fail at every level.
fn envelope_local_min_test(
    game: &dyn SmoothGame,
    x_star: &[f64],
    nbhd: &Neighborhood,
    x_radius: f64,
    cfg: &EnvelopeCfg,
) -> Result<WindowOutcome, EnvelopeError> {
    let base = local_envelope(game, x_star, nbhd, cfg)?;
    let tol = cfg.value_tol * (1.0 + base.abs());
    let mut smallest: Option<(Vec<f64>, f64)> = None;
    let mut window = x_radius;
    for _ in 0..cfg.window_levels {
        let mut violation: f64 = 0.0;
        let mut witness = x_star.to_vec();
        for p in ball_samples(x_star, window, cfg.x_samples) {
            let v = base - local_envelope(game, &p, nbhd, cfg)?;
            if v > violation {
                violation = v;
                witness = p;
            }
        }
        if violation <= tol {
            return Ok(WindowOutcome::Pass { window });
        }
        smallest = Some((witness, violation));
        window /= cfg.window_divisor;
    }
    let (witness, violation) = smallest.expect("window_levels >= 1");
    Ok(WindowOutcome::Fail { witness, violation })
}

/// Direct numeric check of the local-minimax definition at `point`:
/// the second coordinate must locally maximize `f(x*, ·)` and the first must
/// locally minimize the envelope for every radius in `eps_list`.
pub fn verify_local_minimax(
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
    eps_list: &[f64],
    x_radius: f64,
    cfg: &EnvelopeCfg,
) -> Result<Verification, EnvelopeError> {
    let (x_star, y_star) = point;
    let mut evidence = Vec::new();
    let probe = eps_list
        .iter()
        .copied()
        .filter(|e| *e > 0.0)
        .fold(f64::INFINITY, f64::min);
    let inner = local_max_violation(game, x_star, y_star, probe, cfg);
    if inner.improvement > 10.0 * inner.tol {
        evidence.push(format!(
            "inner player improves by {:.3e} at radius {probe}",
            inner.improvement
        ));
        return Ok(Verification {
            verdict: Verdict::No,
            witness: Some(Witness {
                point: inner.witness,
                detail: "y* is not a local maximizer of f(x*, ·)".into(),
            }),
            evidence,
        });
    }
    if inner.improvement > inner.tol {
        evidence.push(format!(
            "inner maximality margin {:.3e} is inside the indeterminate band",
            inner.improvement
        ));
        return Ok(Verification { verdict: Verdict::Inconclusive, witness: None, evidence });
    }
    evidence.push("y* locally maximizes f(x*, ·) on the sampled ball".into());
    for &eps in eps_list {
        let nbhd = Neighborhood::linf(y_star.to_vec(), eps);
        match envelope_local_min_test(game, x_star, &nbhd, x_radius, cfg)? {
            WindowOutcome::Pass { window } => {
                evidence.push(format!("eps={eps}: envelope minimized over window {window:.3e}"));
            }
            WindowOutcome::Fail { witness, violation } => {
                evidence.push(format!("eps={eps}: envelope drops by {violation:.3e}"));
                return Ok(Verification {
                    verdict: Verdict::No,
                    witness: Some(Witness {
                        point: witness,
                        detail: format!("envelope at radius {eps} decreases away from x*"),
                    }),
                    evidence,
                });
            }
        }
    }
    Ok(Verification { verdict: Verdict::Yes, witness: None, evidence })
}

/// Direct numeric check of the local-robust-point definition: both players'
/// envelope tests over radius sequences that include zero. A side passes if
/// its zero-radius member passes or if its smallest positive radii all pass.
pub fn verify_lrp(
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
    eps_list: &[f64],
    delta_list: &[f64],
    cfg: &EnvelopeCfg,
) -> Result<Verification, EnvelopeError> {
    verify_lrp_shaped(game, point, eps_list, delta_list, None, None, cfg)
}

/// [`verify_lrp`] with explicit neighborhood shapes for the two players
/// (the robust-point verdict is shape-dependent).
pub fn verify_lrp_shaped(
    game: &dyn SmoothGame,
    point: (&[f64], &[f64]),
    eps_list: &[f64],
    delta_list: &[f64],
    y_shape: Option<NbhdShape>,
    x_shape: Option<NbhdShape>,
    cfg: &EnvelopeCfg,
) -> Result<Verification, EnvelopeError> {
    let (x_star, y_star) = point;
    let mut evidence = Vec::new();
    let mirrored = MirroredGame::new(game);
    let x_side = lrp_side(
        game,
        x_star,
        y_star,
        eps_list,
        y_shape.unwrap_or(NbhdShape::LInfBall),
        "min-player",
        cfg,
        &mut evidence,
    )?;
    // the max-player's test is the min-player's test on the mirrored game
    let y_side = lrp_side(
        &mirrored,
        y_star,
        x_star,
        delta_list,
        x_shape.unwrap_or(NbhdShape::LInfBall),
        "max-player",
        cfg,
        &mut evidence,
    )?;
    let verdict = match (x_side, y_side) {
        (SideOutcome::Pass, SideOutcome::Pass) => Verdict::Yes,
        (SideOutcome::Fail(w), _) => {
            return Ok(Verification {
                verdict: Verdict::No,
                witness: Some(Witness { point: w, detail: "min-player envelope test fails".into() }),
                evidence,
            });
        }
        (_, SideOutcome::Fail(w)) => {
            return Ok(Verification {
                verdict: Verdict::No,
                witness: Some(Witness { point: w, detail: "max-player envelope test fails".into() }),
                evidence,
            });
        }
        _ => Verdict::Inconclusive,
    };
    Ok(Verification { verdict, witness: None, evidence })
}

enum SideOutcome {
    Pass,
    Fail(Vec<f64>),
    Marginal,
}

#[allow(clippy::too_many_arguments)]
fn lrp_side(
    game: &dyn SmoothGame,
    own_star: &[f64],
    opp_star: &[f64],
    radii: &[f64],
    shape: NbhdShape,
    label: &str,
    cfg: &EnvelopeCfg,
    evidence: &mut Vec<String>,
) -> Result<SideOutcome, EnvelopeError> {
    let own_radius = cfg.lrp_x_radius;
    let mut positives: Vec<f64> = radii.iter().copied().filter(|r| *r > 0.0).collect();
    positives.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut zero_pass = false;
    let mut zero_seen = false;
    let mut zero_fail_witness = None;
    if radii.contains(&0.0) {
        zero_seen = true;
        let nbhd = Neighborhood { center: opp_star.to_vec(), radius: 0.0, shape: shape.clone() };
        match envelope_local_min_test(game, own_star, &nbhd, own_radius, cfg)? {
            WindowOutcome::Pass { .. } => {
                zero_pass = true;
                evidence.push(format!("{label}: zero-radius member passes"));
            }
            WindowOutcome::Fail { witness, .. } => {
                evidence.push(format!("{label}: zero-radius member fails"));
                zero_fail_witness = Some(witness);
            }
        }
    }
    let mut small_pass = 0usize;
    let mut small_total = 0usize;
    let mut fail_witness = None;
    for &r in positives.iter().take(2) {
        small_total += 1;
        let nbhd = Neighborhood { center: opp_star.to_vec(), radius: r, shape: shape.clone() };
        match envelope_local_min_test(game, own_star, &nbhd, own_radius, cfg)? {
            WindowOutcome::Pass { .. } => {
                small_pass += 1;
                evidence.push(format!("{label}: radius {r} passes"));
            }
            WindowOutcome::Fail { witness, .. } => {
                evidence.push(format!("{label}: radius {r} fails"));
                fail_witness = Some(witness);
            }
        }
    }
    if zero_pass || (small_total > 0 && small_pass == small_total) {
        return Ok(SideOutcome::Pass);
    }
    let zero_failed = !zero_seen || zero_fail_witness.is_some();
    if zero_failed && small_total > 0 && small_pass == 0 {
        if let Some(w) = fail_witness.or(zero_fail_witness) {
            return Ok(SideOutcome::Fail(w));
        }
    }
    Ok(SideOutcome::Marginal)
}

fn ball_samples(center: &[f64], radius: f64, count: usize) -> Vec<Vec<f64>> {
    let n = center.len();
    let mut out = Vec::with_capacity(count);
    match n {
        1 => {
            let per_side = count / 2;
            for k in 1..=per_side {
                let off = radius * k as f64 / per_side as f64;
                out.push(vec![center[0] + off]);
                out.push(vec![center[0] - off]);
            }
        }
        2 => {
            let rings = 4.max(count / 16);
            let angles = count / rings;
            for ri in 1..=rings {
                let r = radius * ri as f64 / rings as f64;
                for ai in 0..angles {
                    let th = 2.0 * std::f64::consts::PI * ai as f64 / angles as f64;
                    out.push(vec![center[0] + r * th.cos(), center[1] + r * th.sin()]);
                }
            }
        }
        _ => {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(97);
            for _ in 0..count {
                let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let d = norm(&dir).max(1e-12);
                let r = radius * rng.gen_range(0.05..1.0_f64);
                out.push(center.iter().zip(&dir).map(|(c, v)| c + r * v / d).collect());
            }
        }
    }
    out
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn unit_directions_1d() -> Vec<Vec<f64>> {
    vec![vec![1.0], vec![-1.0]]
}

pub fn unit_directions_2d(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            vec![th.cos(), th.sin()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::quadratic::QuadraticGame;

    fn cfg() -> EnvelopeCfg {
        EnvelopeCfg::default()
    }

    fn brute_force_envelope(game: &dyn SmoothGame, x: &[f64], nbhd: &Neighborhood, steps: usize) -> f64 {
        // independent of the grid+ascent path: plain dense scan
        let mut best = f64::NEG_INFINITY;
        match game.ny() {
            1 => {
                for k in 0..=steps {
                    let y = nbhd.center[0] - nbhd.radius
                        + 2.0 * nbhd.radius * k as f64 / steps as f64;
                    best = best.max(game.value(x, &[y]));
                }
            }
            2 => {
                for i in 0..=steps {
                    for j in 0..=steps {
                        let y = vec![
                            nbhd.center[0] - nbhd.radius + 2.0 * nbhd.radius * i as f64 / steps as f64,
                            nbhd.center[1] - nbhd.radius + 2.0 * nbhd.radius * j as f64 / steps as f64,
                        ];
                        best = best.max(game.value(x, &y));
                    }
                }
            }
            _ => unreachable!(),
        }
        best
    }

    #[test]
    fn local_envelope_examples() {
        let fx = fixture("rem_critical").unwrap();
        let nbhd = Neighborhood::linf(vec![0.0], 0.5);
        let v = local_envelope(fx.oracle.as_ref(), &[0.1], &nbhd, &cfg()).unwrap();
        let brute = brute_force_envelope(fx.oracle.as_ref(), &[0.1], &nbhd, 20_000);
        assert!((v - brute).abs() < 1e-9, "grid+ascent {v} vs brute {brute}");
        assert!((v - 0.0025).abs() < 1e-9);

        // zero radius degenerates to evaluation at the center
        let v0 = local_envelope(fx.oracle.as_ref(), &[0.1], &Neighborhood::linf(vec![0.3], 0.0), &cfg()).unwrap();
        assert_eq!(v0, fx.oracle.value(&[0.1], &[0.3]));

        let bl = fixture("bilinear").unwrap();
        let v = local_envelope(bl.oracle.as_ref(), &[0.2], &Neighborhood::linf(vec![0.0], 1.0), &cfg()).unwrap();
        assert!((v - 0.2).abs() < 1e-10);
    }

    #[test]
    fn active_set_examples() {
        let bl = fixture("bilinear").unwrap();
        let nbhd = Neighborhood::linf(vec![0.0], 0.5);
        let act = active_set(bl.oracle.as_ref(), &[0.0], &nbhd, 1e-9, &cfg()).unwrap();
        // f(0, y) = 0 everywhere, so the whole interval is active
        assert!(act.points.len() > 300, "active set should cover the interval, got {}", act.points.len());
        let lo = act.points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = act.points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        assert!(lo < -0.49 && hi > 0.49);

        let rc = fixture("rem_critical").unwrap();
        let act = active_set(rc.oracle.as_ref(), &[0.0], &nbhd, 1e-9, &cfg()).unwrap();
        assert!(act.points.len() > 300, "f(x*,·) ≡ 0 forces a full active set");

        // strict inner maximum leaves a single point
        let strict = QuadraticGame::new(
            crate::linalg::SymMat::diag(&[0.0]),
            crate::linalg::SymMat::diag(&[-2.0]),
            crate::linalg::Mat::new(1, 1, vec![1.0]).unwrap(),
            vec![0.0],
            vec![0.1],
            0.0,
        )
        .unwrap();
        // f = xy - y^2 + 0.1 y has gradient y-part x - 2y + 0.1
        let act = active_set(&strict, &[0.0], &nbhd, 1e-9, &cfg()).unwrap();
        assert!(act.points.len() <= 3, "strict maximizer should dedup to a point, got {}", act.points.len());
        assert!((act.points[0][0] - 0.05).abs() < 1e-6);
    }

    #[test]
    fn danskin_examples() {
        let bl = fixture("bilinear").unwrap();
        for eps in [0.25, 0.5] {
            let nbhd = Neighborhood::linf(vec![0.0], eps);
            let dd = danskin_dd(bl.oracle.as_ref(), &[0.0], &nbhd, &[1.0], &cfg()).unwrap();
            assert!((dd - eps).abs() < 1e-6, "dd {dd} vs eps {eps}");
            let dd = danskin_dd(bl.oracle.as_ref(), &[0.0], &nbhd, &[-1.0], &cfg()).unwrap();
            assert!((dd - eps).abs() < 1e-6);
        }
        let rc = fixture("rem_critical").unwrap();
        let eps = 0.5;
        let nbhd = Neighborhood::linf(vec![0.0], eps);
        for t in [1.0, -1.0] {
            let dd = danskin_dd(rc.oracle.as_ref(), &[0.0], &nbhd, &[t], &cfg()).unwrap();
            assert!((dd - eps.powi(3)).abs() < 1e-6, "dd {dd} vs {}", eps.powi(3));
        }
        let cube = fixture("glbstatl").unwrap();
        let nbhd = Neighborhood::linf(vec![1.0], 0.5);
        let dd = danskin_dd(cube.oracle.as_ref(), &[0.0], &nbhd, &[1.0], &cfg()).unwrap();
        assert!(dd.abs() < 1e-9, "∂ₓ(x³y) vanishes at x = 0: {dd}");
    }

    #[test]
    fn danskin_matches_finite_difference_quotient() {
        for id in ["bilinear", "rem_critical", "glbstatl"] {
            let fx = fixture(id).unwrap();
            let (x0, y0) = fx.point.clone();
            let eps = 0.5;
            let nbhd = Neighborhood::linf(y0, eps);
            let base = local_envelope(fx.oracle.as_ref(), &x0, &nbhd, &cfg()).unwrap();
            for t in [[1.0], [-1.0]] {
                let dd = danskin_dd(fx.oracle.as_ref(), &x0, &nbhd, &t, &cfg()).unwrap();
                let alpha = 1e-4;
                let xp = [x0[0] + alpha * t[0]];
                let quotient =
                    (local_envelope(fx.oracle.as_ref(), &xp, &nbhd, &cfg()).unwrap() - base) / alpha;
                assert!(
                    (dd - quotient).abs() < 5e-3,
                    "{id}: dd {dd} vs quotient {quotient}"
                );
            }
        }
    }

    #[test]
    fn critical_direction_examples() {
        let eps_list = [0.5, 0.25, 0.1];
        let rc = fixture("rem_critical").unwrap();
        let part = critical_directions(
            rc.oracle.as_ref(),
            &[0.0],
            &[0.0],
            &eps_list,
            &unit_directions_1d(),
            1e-3,
            &cfg(),
        )
        .unwrap();
        assert!(part.critical.is_empty(), "dd = eps³ > 0 in both directions");
        assert!(part.monotone);

        let ho = fixture("higher_order").unwrap();
        let part = critical_directions(
            ho.oracle.as_ref(),
            &[0.0],
            &[0.0],
            &eps_list,
            &unit_directions_1d(),
            1e-3,
            &cfg(),
        )
        .unwrap();
        assert!(part.positive.is_empty(), "every direction is critical");

        let cj = fixture("counter_jin").unwrap();
        let dirs = unit_directions_2d(16);
        let part = critical_directions(
            cj.oracle.as_ref(),
            &[0.0, 0.0],
            &[0.0, 0.0],
            &eps_list,
            &dirs,
            1e-3,
            &cfg(),
        )
        .unwrap();
        for d in &part.critical {
            assert!(d[1].abs() < 1e-9, "critical directions satisfy t2 = 0, got {d:?}");
        }
        assert_eq!(part.critical.len(), 2, "exactly ±e1 on the direction grid");
        assert!(part.monotone);
    }

    #[test]
    fn not_local_max_is_reported() {
        let fx = fixture("stationary_global_no_local").unwrap();
        let err = critical_directions(
            fx.oracle.as_ref(),
            &[0.0],
            &[0.0],
            &[0.1],
            &unit_directions_1d(),
            1e-3,
            &cfg(),
        )
        .unwrap_err();
        assert_eq!(err, EnvelopeError::NotLocalMax);
    }

    #[test]
    fn second_order_term_examples() {
        let ho = fixture("higher_order").unwrap();
        let v = second_order_necessary_term(ho.oracle.as_ref(), &[0.0], &[0.0], &[1.0], &cfg());
        assert!((v - 6.0).abs() < 0.1, "higher-order term {v} vs 6");

        let cj = fixture("counter_jin").unwrap();
        let v = second_order_necessary_term(cj.oracle.as_ref(), &[0.0, 0.0], &[0.0, 0.0], &[1.0, 0.0], &cfg());
        assert!((v - 2.0).abs() < 0.05, "counter_jin critical term {v} vs 2");

        let rc = fixture("rem_critical").unwrap();
        let v = second_order_necessary_term(rc.oracle.as_ref(), &[0.0], &[0.0], &[1.0], &cfg());
        assert!((v - -2.0).abs() < 1e-9, "flat payoff zeroes the correction: {v}");
    }

    #[test]
    fn verify_local_minimax_yes_cases() {
        let eps = [0.1, 0.05, 0.01];
        let nls = fixture("no_local_saddle").unwrap();
        let v = verify_local_minimax(nls.oracle.as_ref(), (&[0.0], &[0.0]), &eps, 0.008, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes, "evidence: {:?}", v.evidence);

        let kawa = fixture("kawa_suff").unwrap();
        let v = verify_local_minimax(kawa.oracle.as_ref(), (&[0.0], &[0.0]), &eps, 0.008, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes, "evidence: {:?}", v.evidence);

        let lng = fixture("local_non_global").unwrap();
        let x = 1.0 / 3.0_f64.sqrt();
        let v = verify_local_minimax(lng.oracle.as_ref(), (&[x], &[0.0]), &eps, 0.05, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes, "evidence: {:?}", v.evidence);
    }

    #[test]
    fn verify_local_minimax_no_cases() {
        let eps = [0.1, 0.05, 0.01];
        let cube = fixture("glbstatl").unwrap();
        let v = verify_local_minimax(cube.oracle.as_ref(), (&[0.0], &[1.0]), &eps, 0.05, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        let w = v.witness.unwrap();
        assert!(w.point[0] < 0.0, "witness should sit on the negative side: {:?}", w.point);

        let sgn = fixture("stationary_global_no_local").unwrap();
        let v = verify_local_minimax(sgn.oracle.as_ref(), (&[0.0], &[0.0]), &eps, 0.05, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::No, "inner-max precondition fails");
        assert!(v.witness.is_some());
    }

    #[test]
    fn verify_lrp_cases() {
        let radii = [0.0, 0.1, 0.05];
        let glp = fixture("glp").unwrap();
        let v = verify_lrp(glp.oracle.as_ref(), (&[0.0], &[0.0]), &radii, &radii, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes, "evidence: {:?}", v.evidence);

        let sep = QuadraticGame::one_dim(-2.0, 2.0, 0.0);
        let v = verify_lrp(&sep, (&[0.0], &[0.0]), &radii, &radii, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::No, "evidence: {:?}", v.evidence);

        let eps0 = fixture("lrp_eps0").unwrap();
        let v = verify_lrp(eps0.oracle.as_ref(), (&[0.0], &[0.0]), &radii, &radii, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes, "evidence: {:?}", v.evidence);

        let flrp = fixture("failure_lrp").unwrap();
        let v = verify_lrp(flrp.oracle.as_ref(), (&[0.0, 0.0], &[0.0, 0.0]), &radii, &radii, &cfg()).unwrap();
        assert_eq!(v.verdict, Verdict::Yes, "evidence: {:?}", v.evidence);
    }

    #[test]
    fn shrinking_envelope_monotonicity() {
        // Danskin derivatives grow with the radius for fixtures whose inner
        // player is locally maximal
        let ids = ["bilinear", "rem_critical", "kawa_suff", "no_local_saddle"];
        let eps_list = [0.05, 0.1, 0.2, 0.4];
        for id in ids {
            let fx = fixture(id).unwrap();
            for t in unit_directions_1d() {
                let mut last = f64::NEG_INFINITY;
                for &eps in &eps_list {
                    let nbhd = Neighborhood::linf(fx.point.1.clone(), eps);
                    let dd = danskin_dd(fx.oracle.as_ref(), &fx.point.0, &nbhd, &t, &cfg()).unwrap();
                    assert!(dd >= last - 1e-5, "{id}: dd not monotone in eps");
                    last = dd;
                }
            }
        }
    }

    #[test]
    fn unsupported_inner_dimension() {
        use crate::linalg::{Mat, SymMat};
        let g = QuadraticGame::homogeneous(SymMat::diag(&[1.0]), SymMat::diag(&[-1.0, -1.0, -1.0]), Mat::zeros(1, 3)).unwrap();
        let nbhd = Neighborhood::linf(vec![0.0; 3], 0.1);
        assert_eq!(
            local_envelope(&g, &[0.0], &nbhd, &cfg()).unwrap_err(),
            EnvelopeError::UnsupportedDim(3)
        );
    }
}
