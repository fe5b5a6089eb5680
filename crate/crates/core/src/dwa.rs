//! Dynamic Window Approach.
//!
//! The search space is the intersection of the box of physically possible
//! velocities with the box reachable within one control period, sampled on a
//! uniform grid. Each sample is rolled out along its arc; samples whose speed
//! would not let the robot brake before the first obstacle are inadmissible.
//! The admissible sample maximizing
//!
//! ```text
//! score = alpha * heading + beta_w * clearance + gamma * velocity
//! ```
//!
//! is selected, with all three terms normalized to `[0, 1]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::kinematics::{heading_error, step};
use crate::world::World;
use crate::{Control, Error, Point, Result, RobotParams, RobotState};

/// Scores within this distance of the best one count as tied.
pub const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityBox {
    pub v_min: f64,
    pub v_max: f64,
    pub w_min: f64,
    pub w_max: f64,
}

impl VelocityBox {
    /// `None` when the boxes do not overlap.
    pub fn intersect(&self, other: &VelocityBox) -> Option<VelocityBox> {
        let out = VelocityBox {
            v_min: self.v_min.max(other.v_min),
            v_max: self.v_max.min(other.v_max),
            w_min: self.w_min.max(other.w_min),
            w_max: self.w_max.min(other.w_max),
        };
        (out.v_min <= out.v_max && out.w_min <= out.w_max).then_some(out)
    }

    pub fn contains(&self, v: f64, w: f64) -> bool {
        (self.v_min..=self.v_max).contains(&v) && (self.w_min..=self.w_max).contains(&w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DwaWeights {
    pub alpha: f64,
    pub beta_w: f64,
    pub gamma: f64,
}

impl Default for DwaWeights {
    fn default() -> Self {
        Self {
            alpha: 0.8,
            beta_w: 0.1,
            gamma: 0.1,
        }
    }
}

impl DwaWeights {
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            alpha: self.alpha * k,
            beta_w: self.beta_w * k,
            gamma: self.gamma * k,
        }
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let all = [self.alpha, self.beta_w, self.gamma];
        let mut out = Vec::new();
        if all.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            out.push("weights: must be finite and non-negative");
        }
        if !all.iter().any(|w| *w > 0.0) {
            out.push("weights: at least one must be positive");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DwaConfig {
    pub n_v: usize,
    pub n_w: usize,
    pub period_t: f64,
    pub horizon: f64,
    pub dt_rollout: f64,
    pub allow_reverse: bool,
    /// Normalization cap for the clearance term and the longest arc checked
    /// for obstacles. Usually the sensor range.
    pub clearance_cap: f64,
}

impl Default for DwaConfig {
    fn default() -> Self {
        Self {
            n_v: 11,
            n_w: 21,
            period_t: 0.1,
            horizon: 2.0,
            dt_rollout: 0.1,
            allow_reverse: false,
            clearance_cap: 5.0,
        }
    }
}

impl DwaConfig {
    pub fn violations(&self) -> Vec<&'static str> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        let mut out = Vec::new();
        if self.n_v < 2 || self.n_w < 2 {
            out.push("n_v, n_w: need at least 2 samples per axis");
        }
        if !positive(self.period_t) {
            out.push("period_t: must be positive");
        }
        if !positive(self.dt_rollout) {
            out.push("dt_rollout: must be positive");
        }
        if !(positive(self.horizon) && self.dt_rollout <= self.horizon) {
            out.push("horizon: must be positive and at least dt_rollout");
        }
        if !positive(self.clearance_cap) {
            out.push("clearance_cap: must be positive");
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(msg) => Err(Error::InvalidParams(msg)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityCandidate {
    pub v: f64,
    pub w: f64,
    pub score: f64,
    pub admissible: bool,
    /// Free arc length ahead along this candidate's path.
    pub clearance: f64,
    pub heading_term: f64,
    pub clearance_term: f64,
    pub velocity_term: f64,
}

/// Velocities the drive can produce at all.
pub fn possible_space(params: &RobotParams, allow_reverse: bool) -> VelocityBox {
    VelocityBox {
        v_min: if allow_reverse { -params.v_max } else { 0.0 },
        v_max: params.v_max,
        w_min: -params.omega_max,
        w_max: params.omega_max,
    }
}

/// Velocities reachable from `current` within one period.
pub fn dynamic_window(
    current: Control,
    params: &RobotParams,
    period_t: f64,
) -> Result<VelocityBox> {
    if !(period_t.is_finite() && period_t > 0.0) {
        return Err(Error::InvalidStep(period_t));
    }
    let dv = params.accel_v * period_t;
    let dw = params.accel_omega * period_t;
    Ok(VelocityBox {
        v_min: current.v - dv,
        v_max: current.v + dv,
        w_min: current.omega - dw,
        w_max: current.omega + dw,
    })
}

/// Whether the robot can still brake to a stop within `clearance_along`.
pub fn admissible(v: f64, w: f64, clearance_along: f64, params: &RobotParams) -> bool {
    v.abs() <= (2.0 * clearance_along * params.brake_v).sqrt()
        && w.abs() <= (2.0 * clearance_along * params.brake_omega).sqrt()
}

/// Poses at `dt, 2 dt, ...` up to `horizon` under constant `(v, w)`.
pub fn rollout(
    state: &RobotState,
    v: f64,
    w: f64,
    horizon: f64,
    dt_rollout: f64,
) -> Vec<RobotState> {
    if !(dt_rollout > 0.0) || !(horizon > 0.0) {
        return Vec::new();
    }
    let n = (horizon / dt_rollout + 1e-9).floor() as usize;
    let control = Control::new(v, w);
    (1..=n)
        .map(|k| step(*state, control, k as f64 * dt_rollout).unwrap_or(*state))
        .collect()
}

/// Weighted sum of the three normalized terms.
pub fn objective(cand: &VelocityCandidate, weights: &DwaWeights) -> f64 {
    weights.alpha * cand.heading_term
        + weights.beta_w * cand.clearance_term
        + weights.gamma * cand.velocity_term
}

/// `i`-th of `n` evenly spaced values over `[lo, hi]`, endpoints exact.
pub fn grid_value(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / (n - 1) as f64)
    }
}

/// Alignment with the goal at the end of the rolled-out path, in `[0, 1]`.
/// A path that enters the goal disc ends there and counts as aligned.
pub fn heading_term(path: &[RobotState], start: &RobotState, goal: Point, goal_radius: f64) -> f64 {
    if path
        .iter()
        .any(|p| p.position().distance(goal) <= goal_radius)
    {
        return 1.0;
    }
    let end = path.last().unwrap_or(start);
    match heading_error(end, goal) {
        Ok(e) => 1.0 - e.abs() / PI,
        Err(_) => 1.0,
    }
}

/// Grid over `Vs ∩ Vd`, v-major, every sample scored and checked against the
/// braking bound.
///
/// The braking check uses the free arc length left after holding the
/// candidate for one control period, so an admissible command can be
/// executed for a full period without contact.
#[allow(clippy::too_many_arguments)]
pub fn search_space_with(
    exec: Exec,
    state: &RobotState,
    current: Control,
    goal: Point,
    params: &RobotParams,
    cfg: &DwaConfig,
    weights: &DwaWeights,
    world: &World,
) -> Result<Vec<VelocityCandidate>> {
    cfg.validate()?;
    let window = dynamic_window(current, params, cfg.period_t)?;
    let space = possible_space(params, cfg.allow_reverse)
        .intersect(&window)
        .ok_or(Error::EmptySearchSpace)?;
    let grid: Vec<(f64, f64)> = (0..cfg.n_v)
        .flat_map(|i| {
            (0..cfg.n_w).map(move |j| {
                (
                    grid_value(space.v_min, space.v_max, i, cfg.n_v),
                    grid_value(space.w_min, space.w_max, j, cfg.n_w),
                )
            })
        })
        .collect();
    Ok(exec.map(&grid, |&(v, w)| {
        let clearance = world.arc_clearance(state, v, w, params, cfg.clearance_cap);
        let path = rollout(state, v, w, cfg.horizon, cfg.dt_rollout);
        let mut cand = VelocityCandidate {
            v,
            w,
            score: 0.0,
            admissible: admissible(v, w, (clearance - v.abs() * cfg.period_t).max(0.0), params),
            clearance,
            heading_term: heading_term(&path, state, goal, world.goal_radius),
            clearance_term: clearance.min(cfg.clearance_cap) / cfg.clearance_cap,
            velocity_term: v / params.v_max,
        };
        cand.score = objective(&cand, weights);
        cand
    }))
}

#[allow(clippy::too_many_arguments)]
pub fn search_space(
    state: &RobotState,
    current: Control,
    goal: Point,
    params: &RobotParams,
    cfg: &DwaConfig,
    weights: &DwaWeights,
    world: &World,
) -> Result<Vec<VelocityCandidate>> {
    search_space_with(
        Exec::default(),
        state,
        current,
        goal,
        params,
        cfg,
        weights,
        world,
    )
}

/// Best admissible candidate by `score_of`: highest score, then among scores
/// within [`TIE_EPS`] of it the smallest `|w|`, then the smallest `v`, then
/// the earliest grid position.
pub fn select_by<F>(candidates: &[VelocityCandidate], score_of: F) -> Option<&VelocityCandidate>
where
    F: Fn(&VelocityCandidate) -> f64,
{
    let best = candidates
        .iter()
        .filter(|c| c.admissible)
        .map(&score_of)
        .fold(f64::NEG_INFINITY, f64::max);
    candidates
        .iter()
        .filter(|c| c.admissible && score_of(c) >= best - TIE_EPS)
        .min_by(|a, b| a.w.abs().total_cmp(&b.w.abs()).then(a.v.total_cmp(&b.v)))
}

/// Selected command; `(0, 0)` when nothing is admissible or the window is
/// empty.
#[allow(clippy::too_many_arguments)]
pub fn plan_with(
    exec: Exec,
    state: &RobotState,
    current: Control,
    goal: Point,
    world: &World,
    params: &RobotParams,
    cfg: &DwaConfig,
    weights: &DwaWeights,
) -> Control {
    match search_space_with(exec, state, current, goal, params, cfg, weights, world) {
        Ok(cands) => {
            select_by(&cands, |c| c.score).map_or(Control::STOP, |c| Control::new(c.v, c.w))
        }
        Err(_) => Control::STOP,
    }
}

pub fn plan(
    state: &RobotState,
    current: Control,
    goal: Point,
    world: &World,
    params: &RobotParams,
    cfg: &DwaConfig,
    weights: &DwaWeights,
) -> Control {
    plan_with(
        Exec::default(),
        state,
        current,
        goal,
        world,
        params,
        cfg,
        weights,
    )
}
