//! Unicycle (differential-drive) model: pose, command, limits and exact
//! state integration.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result};

/// Below this turn rate the arc update switches to its second-order
/// straight-line expansion.
pub const OMEGA_EPS: f64 = 1e-9;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Planar pose. `theta` is kept in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RobotState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl RobotState {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }
}

/// Linear and angular velocity command.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Control {
    pub v: f64,
    pub omega: f64,
}

impl Control {
    pub const STOP: Control = Control { v: 0.0, omega: 0.0 };

    pub const fn new(v: f64, omega: f64) -> Self {
        Self { v, omega }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.omega.is_finite()
    }
}

/// Kinematic limits of the robot. Limits are symmetric about zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotParams {
    pub v_max: f64,
    pub omega_max: f64,
    pub accel_v: f64,
    pub accel_omega: f64,
    pub brake_v: f64,
    pub brake_omega: f64,
    /// Radius of the body disc.
    pub radius: f64,
    pub wheel_base: f64,
}

impl Default for RobotParams {
    fn default() -> Self {
        Self {
            v_max: 1.0,
            omega_max: 2.0,
            accel_v: 1.0,
            accel_omega: 3.0,
            brake_v: 1.0,
            brake_omega: 3.0,
            radius: 0.2,
            wheel_base: 0.3,
        }
    }
}

impl RobotParams {
    /// Names of the fields that are not strictly positive and finite.
    pub fn violations(&self) -> Vec<&'static str> {
        [
            ("v_max", self.v_max),
            ("omega_max", self.omega_max),
            ("accel_v", self.accel_v),
            ("accel_omega", self.accel_omega),
            ("brake_v", self.brake_v),
            ("brake_omega", self.brake_omega),
            ("radius", self.radius),
            ("wheel_base", self.wheel_base),
        ]
        .into_iter()
        .filter(|(_, value)| !(value.is_finite() && *value > 0.0))
        .map(|(name, _)| name)
        .collect()
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(name) => Err(Error::InvalidParams(name)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WheelSpeeds {
    pub left: f64,
    pub right: f64,
}

/// sin(u)/u, with its Taylor expansion near zero.
fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Advances `state` by holding `control` for `dt` seconds.
///
/// The robot follows a circular arc of radius `v/omega`. The closed form
/// `x + (v/w)(sin(th + w dt) - sin th)` is evaluated through the equivalent
/// chord form `v dt sinc(w dt/2) cos(th + w dt/2)`, which has no cancellation
/// for small `w`. Below [`OMEGA_EPS`] a second-order straight-line update is
/// used.
pub fn step(state: RobotState, control: Control, dt: f64) -> Result<RobotState> {
    if !state.is_finite() {
        return Err(Error::InvalidState("pose is not finite"));
    }
    if !control.is_finite() {
        return Err(Error::InvalidState("control is not finite"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidStep(dt));
    }
    let Control { v, omega } = control;
    let (x, y) = if omega.abs() < OMEGA_EPS {
        let (s, c) = state.theta.sin_cos();
        let turn = 0.5 * omega * dt;
        (
            state.x + v * dt * (c - turn * s),
            state.y + v * dt * (s + turn * c),
        )
    } else {
        let half = 0.5 * omega * dt;
        let chord = v * dt * sinc(half);
        let (s, c) = (state.theta + half).sin_cos();
        (state.x + chord * c, state.y + chord * s)
    };
    Ok(RobotState {
        x,
        y,
        theta: wrap_angle(state.theta + omega * dt),
    })
}

pub fn control_to_wheels(control: Control, wheel_base: f64) -> Result<WheelSpeeds> {
    if !(wheel_base.is_finite() && wheel_base > 0.0) {
        return Err(Error::InvalidParams("wheel_base"));
    }
    let half = 0.5 * control.omega * wheel_base;
    Ok(WheelSpeeds {
        left: control.v - half,
        right: control.v + half,
    })
}

pub fn wheels_to_control(wheels: WheelSpeeds, wheel_base: f64) -> Result<Control> {
    if !(wheel_base.is_finite() && wheel_base > 0.0) {
        return Err(Error::InvalidParams("wheel_base"));
    }
    Ok(Control {
        v: 0.5 * (wheels.left + wheels.right),
        omega: (wheels.right - wheels.left) / wheel_base,
    })
}

/// Clips each component into `[-max, max]` independently.
pub fn clamp_control(control: Control, params: &RobotParams) -> Control {
    Control {
        v: control.v.clamp(-params.v_max, params.v_max),
        omega: control.omega.clamp(-params.omega_max, params.omega_max),
    }
}

/// Bearing to `goal` relative to the current heading, in `(-pi, pi]`.
pub fn heading_error(state: &RobotState, goal: Point) -> Result<f64> {
    let dx = goal.x - state.x;
    let dy = goal.y - state.y;
    if dx.hypot(dy) <= 1e-9 {
        return Err(Error::DegenerateGoal);
    }
    Ok(wrap_angle(dy.atan2(dx) - state.theta))
}
