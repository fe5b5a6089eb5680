//! Q16.16 saturating fixed point, and the PID and DWA-objective kernels
//! re-expressed in it.
//!
//! Arithmetic is pure integer: products go through a 64-bit intermediate,
//! are rounded to nearest (ties to even) at bit 16 and saturated to the
//! 32-bit range. Nothing wraps. Kernels never divide; reciprocals are
//! prepared once at configuration time.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::controllers::{PidGains, PidState};
use crate::{Error, Result};

pub const FRAC_BITS: u32 = 16;
const ONE_RAW: i64 = 1 << FRAC_BITS;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fx(pub i32);

impl fmt::Debug for Fx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fx({} = {})", self.0, self.to_real())
    }
}

fn saturate(raw: i64) -> Fx {
    Fx(raw.clamp(i64::from(i32::MIN), i64::from(i32::MAX)) as i32)
}

/// `value / 2^16` rounded to nearest, ties to even.
fn round_shift(value: i64) -> i64 {
    let floor = value >> FRAC_BITS;
    let rem = value & (ONE_RAW - 1);
    let half = ONE_RAW >> 1;
    if rem > half || (rem == half && floor & 1 == 1) {
        floor + 1
    } else {
        floor
    }
}

impl Fx {
    pub const ZERO: Fx = Fx(0);
    pub const ONE: Fx = Fx(1 << FRAC_BITS);
    pub const MAX: Fx = Fx(i32::MAX);
    pub const MIN: Fx = Fx(i32::MIN);

    /// Nearest representable value, ties to even, saturating. NaN maps to 0.
    pub fn from_real(x: f64) -> Fx {
        if x.is_nan() {
            return Fx::ZERO;
        }
        let scaled = (x * ONE_RAW as f64).round_ties_even();
        if scaled >= f64::from(i32::MAX) {
            Fx::MAX
        } else if scaled <= f64::from(i32::MIN) {
            Fx::MIN
        } else {
            Fx(scaled as i32)
        }
    }

    pub fn to_real(self) -> f64 {
        f64::from(self.0) / ONE_RAW as f64
    }

    pub fn raw(self) -> i32 {
        self.0
    }

    pub fn is_saturated(self) -> bool {
        self == Fx::MAX || self == Fx::MIN
    }

    pub fn clamp_abs(self, bound: Fx) -> Fx {
        let b = bound.0.saturating_abs();
        Fx(self.0.clamp(-b, b))
    }
}

pub fn fx_add(a: Fx, b: Fx) -> Fx {
    Fx(a.0.saturating_add(b.0))
}

pub fn fx_sub(a: Fx, b: Fx) -> Fx {
    Fx(a.0.saturating_sub(b.0))
}

pub fn fx_mul(a: Fx, b: Fx) -> Fx {
    saturate(round_shift(i64::from(a.0) * i64::from(b.0)))
}

impl Add for Fx {
    type Output = Fx;
    fn add(self, rhs: Fx) -> Fx {
        fx_add(self, rhs)
    }
}

impl Sub for Fx {
    type Output = Fx;
    fn sub(self, rhs: Fx) -> Fx {
        fx_sub(self, rhs)
    }
}

impl Mul for Fx {
    type Output = Fx;
    fn mul(self, rhs: Fx) -> Fx {
        fx_mul(self, rhs)
    }
}

impl Neg for Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx(self.0.saturating_neg())
    }
}

/// PID gains and integral clamp in fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FxPidGains {
    pub kp: Fx,
    pub ki: Fx,
    pub kd: Fx,
    pub i_clamp: Fx,
}

impl FxPidGains {
    pub fn from_real(gains: &PidGains) -> Self {
        Self {
            kp: Fx::from_real(gains.kp),
            ki: Fx::from_real(gains.ki),
            kd: Fx::from_real(gains.kd),
            i_clamp: gains.i_clamp.map_or(Fx::MAX, |c| Fx::from_real(c.abs())),
        }
    }
}

/// Sample period with its reciprocal prepared for the derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FxStep {
    pub dt: Fx,
    pub inv_dt: Fx,
}

impl FxStep {
    pub fn new(dt: f64) -> Result<Self> {
        let fx = Fx::from_real(dt);
        if !(dt.is_finite() && fx.0 > 0) {
            return Err(Error::InvalidStep(dt));
        }
        Ok(Self {
            dt: fx,
            inv_dt: Fx::from_real(1.0 / fx.to_real()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FxPidState {
    pub integral: Fx,
    pub prev_error: Fx,
    pub initialized: bool,
}

impl From<FxPidState> for PidState {
    fn from(s: FxPidState) -> Self {
        PidState {
            integral: s.integral.to_real(),
            prev_error: s.prev_error.to_real(),
            initialized: s.initialized,
        }
    }
}

/// Same dataflow as [`crate::controllers::pid_step`], every operation in
/// saturating Q16.16.
pub fn fx_pid_step(
    gains: &FxPidGains,
    st: FxPidState,
    error: Fx,
    step: &FxStep,
) -> (Fx, FxPidState) {
    let integral = (st.integral + error * step.dt).clamp_abs(gains.i_clamp);
    let derivative = if st.initialized {
        (error - st.prev_error) * step.inv_dt
    } else {
        Fx::ZERO
    };
    let out = gains.kp * error + gains.ki * integral + gains.kd * derivative;
    (
        out,
        FxPidState {
            integral,
            prev_error: error,
            initialized: true,
        },
    )
}

/// `alpha * h + beta * d + gamma * v` in fixed point; terms and weights are
/// `(heading, clearance, velocity)` and `(alpha, beta_w, gamma)`.
pub fn fx_objective(terms: [Fx; 3], weights: [Fx; 3]) -> Fx {
    weights[0] * terms[0] + weights[1] * terms[1] + weights[2] * terms[2]
}
