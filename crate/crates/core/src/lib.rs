//! Deterministic 2D mobile-robot simulation kernels.
//!
//! The crate is organised bottom-up:
//!
//! - [`kinematics`]: unicycle pose/command types and exact-arc integration.
//! - [`controllers`]: discrete PID, triangulated wall distance and a
//!   wall-following state machine.
//! - [`dwa`]: Dynamic Window Approach planner over a sampled velocity grid.
//! - [`world`]: obstacle geometry, ray-cast range sensing, arc clearance.
//! - [`metrics`]: navigation performance criteria computed from run logs.
//! - [`fxp`]: Q16.16 saturating fixed-point golden model of the control kernels.
//!
//! With the default `parallel` feature, DWA candidate evaluation runs on the
//! rayon pool. Results are always reduced in grid order, so the selected
//! command is identical with or without the feature.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controllers;
pub mod dwa;
mod error;
pub mod exec;
pub mod fxp;
pub mod geometry;
pub mod kinematics;
pub mod metrics;
pub mod rng;
pub mod world;

pub use error::{Error, Result};
pub use geometry::Point;
pub use kinematics::{Control, RobotParams, RobotState, WheelSpeeds};
