//! Discrete-time gradient algorithms on zero-sum games: GDA, heavy ball,
//! Nesterov momentum, extra-gradient, past-extra-gradient and optimistic
//! gradient descent, in simultaneous and (for GDA/OGD) alternating form,
//! plus trajectory simulation.

use crate::oracle::SmoothGame;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("extra-gradient ratio must be positive")]
    NonPositiveBeta,
    #[error("optimistic coefficient must satisfy k > 1")]
    InvalidK,
    #[error("alternating updates are only defined for GDA and OGD")]
    UnsupportedAlternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gda,
    Hb,
    Nag,
    Eg,
    PastEg,
    Ogd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateMode {
    Simultaneous,
    Alternating,
}

/// Algorithm family plus hyperparameters. `beta` is the momentum factor for
/// HB/NAG and the extra-gradient ratio for EG/PastEG; `k` is the optimistic
/// coefficient.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlgorithmSpec {
    pub family: Family,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub k: f64,
    pub update_mode: UpdateMode,
}

impl AlgorithmSpec {
    pub fn gda(alpha1: f64, alpha2: f64) -> Self {
        Self { family: Family::Gda, alpha1, alpha2, beta: 0.0, k: 1.0, update_mode: UpdateMode::Simultaneous }
    }

    pub fn hb(alpha1: f64, alpha2: f64, beta: f64) -> Self {
        Self { family: Family::Hb, alpha1, alpha2, beta, k: 1.0, update_mode: UpdateMode::Simultaneous }
    }

    pub fn nag(alpha1: f64, alpha2: f64, beta: f64) -> Self {
        Self { family: Family::Nag, alpha1, alpha2, beta, k: 1.0, update_mode: UpdateMode::Simultaneous }
    }

    pub fn eg(alpha1: f64, alpha2: f64, beta: f64) -> Result<Self, DynError> {
        if beta <= 0.0 {
            return Err(DynError::NonPositiveBeta);
        }
        Ok(Self { family: Family::Eg, alpha1, alpha2, beta, k: 1.0, update_mode: UpdateMode::Simultaneous })
    }

    pub fn past_eg(alpha1: f64, alpha2: f64, beta: f64) -> Result<Self, DynError> {
        if beta <= 0.0 {
            return Err(DynError::NonPositiveBeta);
        }
        Ok(Self { family: Family::PastEg, alpha1, alpha2, beta, k: 1.0, update_mode: UpdateMode::Simultaneous })
    }

    pub fn ogd(k: f64, alpha1: f64, alpha2: f64) -> Result<Self, DynError> {
        if k <= 1.0 {
            return Err(DynError::InvalidK);
        }
        Ok(Self { family: Family::Ogd, alpha1, alpha2, beta: 0.0, k, update_mode: UpdateMode::Simultaneous })
    }

    pub fn alternating(mut self) -> Result<Self, DynError> {
        if !matches!(self.family, Family::Gda | Family::Ogd) {
            return Err(DynError::UnsupportedAlternating);
        }
        self.update_mode = UpdateMode::Alternating;
        Ok(self)
    }
}

/// The optimistic coefficient matching a past-extra-gradient ratio:
/// `k = 1 + 1/beta`.
pub fn ogd_from_past_eg(beta: f64) -> Result<f64, DynError> {
    if beta <= 0.0 {
        return Err(DynError::NonPositiveBeta);
    }
    Ok(1.0 + 1.0 / beta)
}

/// Two-time-scale vector field `v(z) = (−α₁ ∂ₓf, α₂ ∂ᵧf)`.
pub fn vector_field(
    game: &dyn SmoothGame,
    z: &[f64],
    alpha1: f64,
    alpha2: f64,
) -> Result<Vec<f64>, DynError> {
    let (n, m) = (game.nx(), game.ny());
    if z.len() != n + m {
        return Err(DynError::DimensionMismatch(format!(
            "state has length {}, game needs {}",
            z.len(),
            n + m
        )));
    }
    let (x, y) = z.split_at(n);
    let gx = game.grad_x(x, y);
    let gy = game.grad_y(x, y);
    let mut v = Vec::with_capacity(n + m);
    v.extend(gx.iter().map(|g| -alpha1 * g));
    v.extend(gy.iter().map(|g| alpha2 * g));
    Ok(v)
}

/// Iteration state. Two-step methods carry the previous iterate; the
/// past-extra-gradient method carries the previous half-step point.
#[derive(Debug, Clone)]
pub struct DynState {
    pub z: Vec<f64>,
    pub prev_z: Option<Vec<f64>>,
    pub prev_half: Option<Vec<f64>>,
}

impl DynState {
    pub fn new(z0: Vec<f64>) -> Self {
        Self { z: z0, prev_z: None, prev_half: None }
    }
}

/// One exact update of the chosen recurrence. Histories are seeded with a
/// plain GDA step on the first iteration.
pub fn step(spec: &AlgorithmSpec, game: &dyn SmoothGame, state: &DynState) -> Result<DynState, DynError> {
    let v = |z: &[f64]| vector_field(game, z, spec.alpha1, spec.alpha2);
    let z = &state.z;
    match (spec.update_mode, spec.family) {
        (UpdateMode::Simultaneous, Family::Gda) => {
            let vz = v(z)?;
            Ok(DynState { z: add(z, &vz), prev_z: Some(z.clone()), prev_half: None })
        }
        (UpdateMode::Simultaneous, Family::Hb) => {
            let vz = v(z)?;
            let next = match &state.prev_z {
                None => add(z, &vz),
                Some(prev) => {
                    let mut out = add(z, &vz);
                    for i in 0..out.len() {
                        out[i] += spec.beta * (z[i] - prev[i]);
                    }
                    out
                }
            };
            Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: None })
        }
        (UpdateMode::Simultaneous, Family::Nag) => {
            let next = match &state.prev_z {
                None => add(z, &v(z)?),
                Some(prev) => {
                    let mut look = z.clone();
                    for i in 0..look.len() {
                        look[i] += spec.beta * (z[i] - prev[i]);
                    }
                    add(&look, &v(&look)?)
                }
            };
            Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: None })
        }
        (UpdateMode::Simultaneous, Family::Eg) => {
            let half = add(z, &v(z)?);
            let vh = v(&half)?;
            let next: Vec<f64> = z.iter().zip(&vh).map(|(zi, vi)| zi + vi / spec.beta).collect();
            Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: Some(half) })
        }
        (UpdateMode::Simultaneous, Family::PastEg) => {
            let anchor = state.prev_half.clone().unwrap_or_else(|| z.clone());
            let half = add(z, &v(&anchor)?);
            let vh = v(&half)?;
            let next: Vec<f64> = z.iter().zip(&vh).map(|(zi, vi)| zi + vi / spec.beta).collect();
            Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: Some(half) })
        }
        (UpdateMode::Simultaneous, Family::Ogd) => {
            let next = match &state.prev_z {
                None => add(z, &v(z)?),
                Some(prev) => {
                    let vz = v(z)?;
                    let vp = v(prev)?;
                    z.iter()
                        .zip(vz.iter().zip(&vp))
                        .map(|(zi, (cur, old))| zi + spec.k * cur - old)
                        .collect()
                }
            };
            Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: None })
        }
        (UpdateMode::Alternating, Family::Gda) => {
            let n = game.nx();
            let (x, y) = z.split_at(n);
            let gx = game.grad_x(x, y);
            let x_next: Vec<f64> = x.iter().zip(&gx).map(|(xi, g)| xi - spec.alpha1 * g).collect();
            let gy = game.grad_y(&x_next, y);
            let y_next: Vec<f64> = y.iter().zip(&gy).map(|(yi, g)| yi + spec.alpha2 * g).collect();
            let mut next = x_next;
            next.extend(y_next);
            Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: None })
        }
        (UpdateMode::Alternating, Family::Ogd) => {
            let n = game.nx();
            let (x, y) = z.split_at(n);
            match &state.prev_z {
                None => {
                    // alternating GDA seed
                    let gx = game.grad_x(x, y);
                    let x_next: Vec<f64> =
                        x.iter().zip(&gx).map(|(xi, g)| xi - spec.alpha1 * g).collect();
                    let gy = game.grad_y(&x_next, y);
                    let y_next: Vec<f64> =
                        y.iter().zip(&gy).map(|(yi, g)| yi + spec.alpha2 * g).collect();
                    let mut next = x_next;
                    next.extend(y_next);
                    Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: None })
                }
                Some(prev) => {
                    let (xp, yp) = prev.split_at(n);
                    let gx_cur = game.grad_x(x, y);
                    let gx_old = game.grad_x(xp, yp);
                    let x_next: Vec<f64> = (0..n)
                        .map(|i| x[i] - spec.k * spec.alpha1 * gx_cur[i] + spec.alpha1 * gx_old[i])
                        .collect();
                    let gy_cur = game.grad_y(&x_next, y);
                    let gy_old = game.grad_y(x, yp);
                    let y_next: Vec<f64> = (0..game.ny())
                        .map(|j| y[j] + spec.k * spec.alpha2 * gy_cur[j] - spec.alpha2 * gy_old[j])
                        .collect();
                    let mut next = x_next;
                    next.extend(y_next);
                    Ok(DynState { z: next, prev_z: Some(z.clone()), prev_half: None })
                }
            }
        }
        (UpdateMode::Alternating, _) => Err(DynError::UnsupportedAlternating),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub iterates: Vec<Vec<f64>>,
    pub vector_field_norms: Vec<f64>,
    pub converged: bool,
    pub diverged: bool,
    pub iterations_used: usize,
    pub final_distance_to_target: Option<f64>,
}

impl TrajectoryRecord {
    /// Divergence or residual stagnation above `stop_tol` over the final
    /// tenth of the recorded trajectory.
    pub fn non_convergent(&self, stop_tol: f64) -> bool {
        if self.diverged {
            return true;
        }
        if self.converged {
            return false;
        }
        let tail = self.vector_field_norms.len() / 10;
        self.vector_field_norms
            .iter()
            .rev()
            .take(tail.max(1))
            .all(|&v| v > stop_tol)
    }
}

/// Iterate until the vector field is below `stop_tol` (converged), the state
/// norm reaches `divergence_bound` (diverged), or `max_iters`.
pub fn simulate(
    spec: &AlgorithmSpec,
    game: &dyn SmoothGame,
    z0: &[f64],
    max_iters: usize,
    stop_tol: f64,
    divergence_bound: f64,
    target: Option<&[f64]>,
) -> Result<TrajectoryRecord, DynError> {
    let mut state = DynState::new(z0.to_vec());
    let mut iterates = vec![state.z.clone()];
    let mut vnorms = vec![norm(&vector_field(game, &state.z, spec.alpha1, spec.alpha2)?)];
    let mut converged = false;
    let mut diverged = false;
    let mut used = 0;
    for _ in 0..max_iters {
        state = step(spec, game, &state)?;
        used += 1;
        let vn = norm(&vector_field(game, &state.z, spec.alpha1, spec.alpha2)?);
        iterates.push(state.z.clone());
        vnorms.push(vn);
        if vn <= stop_tol {
            converged = true;
            break;
        }
        if norm(&state.z) >= divergence_bound || !vn.is_finite() {
            diverged = true;
            break;
        }
    }
    let final_distance_to_target = target.map(|t| {
        state
            .z
            .iter()
            .zip(t)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    });
    Ok(TrajectoryRecord {
        iterates,
        vector_field_norms: vnorms,
        converged,
        diverged,
        iterations_used: used,
        final_distance_to_target,
    })
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
