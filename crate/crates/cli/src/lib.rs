//! Scenario runner and report tooling built on `navbench-core`.
//!
//! A scenario file describes a world, a sensor, a robot and controller
//! settings. [`run_scenario`] drives one controller through it with a fixed
//! seed and produces a [`RunRecord`]; [`batch`] does so for a whole
//! cross-product. Records persist as JSONL logs and CSV report rows.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod batch;
mod error;
pub mod fxcheck;
pub mod plot;
pub mod record;
pub mod runner;
pub mod scenario;

pub use batch::{batch, batch_with, BatchReport};
pub use error::{Error, Result};
pub use plot::{plot, render_svg};
pub use runner::{run_scenario, run_scenario_with, ControllerId, RunRecord};
pub use scenario::{validate_scenario, Scenario};
