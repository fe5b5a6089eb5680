use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use serde::{Deserialize, Serialize};

use super::pid::{pid_step, PidGains, PidState};
use crate::kinematics::clamp_control;
use crate::world::RangeScan;
use crate::{Control, Error, Result, RobotParams};

/// Height of a triangle over its third side, from two sides `a`, `b` and the
/// angle `beta` between them.
///
/// With the robot at the apex and two beams hitting a straight wall, this is
/// the perpendicular distance from the robot to the wall line.
pub fn triangle_height(a: f64, b: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < PI) {
        return Err(Error::InvalidAngle(beta));
    }
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::DegenerateTriangle);
    }
    let c = (a * a + b * b - 2.0 * a * b * beta.cos()).max(0.0).sqrt();
    if c < 1e-12 {
        return Err(Error::DegenerateTriangle);
    }
    Ok(a * b * beta.sin() / c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// Sign of robot-frame angles on this side.
    fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallFollowConfig {
    pub side: Side,
    pub desired_distance: f64,
    pub v0: f64,
    pub front_threshold: f64,
    pub lost_threshold: f64,
    pub turn_gains: PidGains,
    /// Turn rate used while searching for a lost wall.
    pub search_omega: f64,
}

impl WallFollowConfig {
    pub fn violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !(self.desired_distance.is_finite() && self.desired_distance > 0.0) {
            out.push("desired_distance: must be positive");
        }
        if !(self.lost_threshold > self.desired_distance) {
            out.push("lost_threshold: must exceed desired_distance");
        }
        if !(self.front_threshold.is_finite() && self.front_threshold > 0.0) {
            out.push("front_threshold: must be positive");
        }
        if !self.v0.is_finite() {
            out.push("v0: must be finite");
        }
        if !(self.search_omega.is_finite() && self.search_omega >= 0.0) {
            out.push("search_omega: must be non-negative");
        }
        if !self.turn_gains.is_finite() {
            out.push("turn_gains: must be finite");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallMode {
    #[default]
    Track,
    TurnCorner,
    /// The followed wall is out of range.
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WallFollowState {
    pub mode: WallMode,
    pub pid: PidState,
}

/// Beams the follower reads: straight ahead, perpendicular to the followed
/// side, and the diagonal between them.
struct Beams {
    front: usize,
    side: usize,
    diagonal: usize,
}

fn select_beams(scan: &RangeScan, side: Side) -> Result<Beams> {
    let insufficient = Error::InsufficientScan(scan.len());
    if scan.len() < 3 || scan.beam_angles.len() != scan.len() {
        return Err(insufficient);
    }
    let s = side.sign();
    let pick = |target: f64| scan.nearest_beam(target).ok_or(insufficient.clone());
    let beams = Beams {
        front: pick(0.0)?,
        side: pick(s * FRAC_PI_2)?,
        diagonal: pick(s * FRAC_PI_4)?,
    };
    let angle = |i: usize| scan.beam_angles[i];
    let covers_side = (angle(beams.side) - s * FRAC_PI_2).abs() <= FRAC_PI_8;
    let diagonal_between =
        s * angle(beams.diagonal) > 0.0 && angle(beams.diagonal).abs() < angle(beams.side).abs();
    let front_ahead = angle(beams.front).abs() < angle(beams.diagonal).abs();
    if covers_side && diagonal_between && front_ahead {
        Ok(beams)
    } else {
        Err(insufficient)
    }
}

/// Mode implied by one scan. Every scan maps to exactly one mode:
///
/// | condition                                  | mode        |
/// |--------------------------------------------|-------------|
/// | front < front_threshold                    | TurnCorner  |
/// | otherwise, both side beams >= lost_thresh   | Search      |
/// | otherwise                                  | Track       |
fn next_mode(cfg: &WallFollowConfig, front: f64, side: f64, diagonal: f64) -> WallMode {
    if front < cfg.front_threshold {
        WallMode::TurnCorner
    } else if side.min(diagonal) >= cfg.lost_threshold {
        WallMode::Search
    } else {
        WallMode::Track
    }
}

/// One step of the wall-following state machine.
///
/// In `Track` the wall distance is triangulated from the side and diagonal
/// beams and a PID drives it to `desired_distance`; the PID memory is reset
/// whenever `Track` is (re)entered.
pub fn wall_follow_step(
    cfg: &WallFollowConfig,
    st: WallFollowState,
    scan: &RangeScan,
    params: &RobotParams,
    dt: f64,
) -> Result<(Control, WallFollowState)> {
    let beams = select_beams(scan, cfg.side)?;
    let (front, side, diagonal) = (
        scan.ranges[beams.front],
        scan.ranges[beams.side],
        scan.ranges[beams.diagonal],
    );
    let s = cfg.side.sign();
    let mode = next_mode(cfg, front, side, diagonal);
    let (control, pid) = match mode {
        WallMode::TurnCorner => (
            Control::new(0.0, -s * params.omega_max),
            PidState::default(),
        ),
        WallMode::Search => (
            Control::new(cfg.v0, s * cfg.search_omega),
            PidState::default(),
        ),
        WallMode::Track => {
            let pid = if st.mode == WallMode::Track {
                st.pid
            } else {
                PidState::default()
            };
            let spread = (scan.beam_angles[beams.side] - scan.beam_angles[beams.diagonal]).abs();
            // Only a zero-length reading can make the triangle degenerate,
            // and then the robot is touching the wall.
            let wall_distance = triangle_height(side, diagonal, spread).unwrap_or(0.0);
            let gains = cfg.turn_gains.with_default_clamp(params.omega_max);
            let (u, pid) = pid_step(&gains, pid, cfg.desired_distance - wall_distance, dt)?;
            // Positive error means too close: turn away from the wall.
            (Control::new(cfg.v0, -s * u), pid)
        }
    };
    Ok((
        clamp_control(control, params),
        WallFollowState { mode, pid },
    ))
}
