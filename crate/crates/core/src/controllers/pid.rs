use serde::{Deserialize, Serialize};

use crate::kinematics::{clamp_control, heading_error};
use crate::{Control, Error, Point, Result, RobotParams, RobotState};

/// Proportional, integral and derivative gains plus the integral clamp.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    /// Bound on the accumulated integral. `None` means unbounded in
    /// [`pid_step`]; [`heading_controller`] replaces it with
    /// `10 * |omega_max / ki|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_clamp: Option<f64>,
}

impl PidGains {
    pub const fn new(kp: f64, ki: f64, kd: f64) -> Self {
        Self {
            kp,
            ki,
            kd,
            i_clamp: None,
        }
    }

    pub fn with_i_clamp(self, i_clamp: f64) -> Self {
        Self {
            i_clamp: Some(i_clamp),
            ..self
        }
    }

    /// Fills an unset clamp with the default anti-windup bound for a turn
    /// rate limit of `omega_max`.
    pub fn with_default_clamp(self, omega_max: f64) -> Self {
        match self.i_clamp {
            Some(_) => self,
            None if self.ki == 0.0 => self,
            None => self.with_i_clamp(10.0 * (omega_max / self.ki).abs()),
        }
    }

    pub fn clamp_bound(&self) -> f64 {
        self.i_clamp.map_or(f64::INFINITY, f64::abs)
    }

    pub fn is_finite(&self) -> bool {
        self.kp.is_finite() && self.ki.is_finite() && self.kd.is_finite()
    }
}

/// Integrator and derivative memory of one PID loop.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PidState {
    pub integral: f64,
    pub prev_error: f64,
    pub initialized: bool,
}

/// One controller update.
///
/// The integral is a backward rectangular sum, clamped after each update.
/// The derivative is the backward difference of the error, and is zero on the
/// first call after a reset.
pub fn pid_step(gains: &PidGains, st: PidState, error: f64, dt: f64) -> Result<(f64, PidState)> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidStep(dt));
    }
    let bound = gains.clamp_bound();
    let integral = (st.integral + error * dt).clamp(-bound, bound);
    let derivative = if st.initialized {
        (error - st.prev_error) / dt
    } else {
        0.0
    };
    let output = gains.kp * error + gains.ki * integral + gains.kd * derivative;
    Ok((
        output,
        PidState {
            integral,
            prev_error: error,
            initialized: true,
        },
    ))
}

/// Constant-speed goal seeking: the PID acts on the bearing error and sets
/// the turn rate only; the linear speed is `v0` before clamping.
#[allow(clippy::too_many_arguments)]
pub fn heading_controller(
    gains: &PidGains,
    st: PidState,
    state: &RobotState,
    goal: Point,
    v0: f64,
    dt: f64,
    params: &RobotParams,
) -> Result<(Control, PidState)> {
    let error = heading_error(state, goal)?;
    let gains = gains.with_default_clamp(params.omega_max);
    let (omega, st) = pid_step(&gains, st, error, dt)?;
    Ok((clamp_control(Control::new(v0, omega), params), st))
}
