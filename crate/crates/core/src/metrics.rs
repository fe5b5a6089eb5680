//! Navigation performance criteria computed from a recorded run.
//!
//! Every function here is a pure function of the log, so a report recomputed
//! from a persisted log is bit-identical to the one produced at run time.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::point_polyline_distance;
use crate::{Control, Error, Point, Result, RobotState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Reached,
    Collided,
    Timeout,
}

/// One control period of a run: the pose at `t` and the command held over
/// `[t, t + T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: RobotState,
    pub control: Control,
    pub clearance: f64,
    pub ranges: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub sample_period: f64,
    pub samples: Vec<Sample>,
    pub outcome: Outcome,
    pub planner_decisions: u64,
    #[serde(default)]
    pub passages_crossed: Vec<String>,
    #[serde(default)]
    pub reference_path: Option<Vec<Point>>,
}

impl TrajectoryLog {
    fn positions(&self) -> impl Iterator<Item = Point> + '_ {
        self.samples.iter().map(|s| s.state.position())
    }

    /// Time spanned by the samples, `n * T`.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.sample_period
    }

    pub fn final_position(&self) -> Option<Point> {
        self.samples.last().map(|s| s.state.position())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeTerm {
    /// `(ref - time) / 100`: finishing early raises the score.
    #[default]
    EarlyBonus,
    /// `(time - ref) / 100`: finishing late raises the score.
    LateBonus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub ref_time: f64,
    #[serde(default)]
    pub mode: TimeTerm,
}

/// Everything needed to turn a log into a [`MetricsReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub goal: Point,
    pub time_limit: f64,
    pub eval: EvalConfig,
    pub c_v: f64,
    pub c_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub success: bool,
    pub time_to_goal: Option<f64>,
    pub path_length: f64,
    pub control_periods: u64,
    pub ise: f64,
    pub iae: f64,
    pub itae: f64,
    pub final_error: f64,
    pub mean_error: f64,
    pub evaluation: f64,
    pub avg_obstacle_distance: f64,
    pub min_avg_obstacle_distance: f64,
    pub energy: f64,
    pub passages: usize,
}

/// Result of one attempt, as counted by [`success_rate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Attempt {
    pub outcome: Outcome,
    pub elapsed: f64,
}

/// Percentage of attempts that reached the goal within `time_limit`.
pub fn success_rate(attempts: &[Attempt], time_limit: f64) -> Result<f64> {
    if attempts.is_empty() {
        return Err(Error::NoRuns);
    }
    let ok = attempts
        .iter()
        .filter(|a| a.outcome == Outcome::Reached && a.elapsed <= time_limit)
        .count();
    Ok(100.0 * ok as f64 / attempts.len() as f64)
}

pub fn narrow_passage_count(log: &TrajectoryLog) -> usize {
    log.passages_crossed.iter().collect::<BTreeSet<_>>().len()
}

pub fn path_length(log: &TrajectoryLog) -> Result<f64> {
    if log.samples.is_empty() {
        return Err(Error::EmptyLog);
    }
    let pts: Vec<Point> = log.positions().collect();
    Ok(pts.windows(2).map(|w| w[0].distance(w[1])).sum())
}

pub fn time_to_goal(log: &TrajectoryLog) -> Option<f64> {
    match log.outcome {
        Outcome::Reached => log.samples.last().map(|s| s.t),
        _ => None,
    }
}

pub fn control_periods(log: &TrajectoryLog) -> u64 {
    log.planner_decisions
}

/// Cross-track error integrals as left rectangular sums over the samples:
/// `(sum e^2 T, sum |e| T, sum nT |e| T)`.
pub fn error_integrals(log: &TrajectoryLog) -> Result<(f64, f64, f64)> {
    let reference = log
        .reference_path
        .as_deref()
        .filter(|p| !p.is_empty())
        .ok_or(Error::NoReference)?;
    let t = log.sample_period;
    let mut sums = (0.0, 0.0, 0.0);
    for (n, p) in log.positions().enumerate() {
        let e = point_polyline_distance(p, reference).unwrap_or(0.0);
        sums.0 += e * e * t;
        sums.1 += e * t;
        sums.2 += n as f64 * t * e * t;
    }
    Ok(sums)
}

pub fn final_error(log: &TrajectoryLog, endpoint: Point) -> Result<f64> {
    log.final_position()
        .map(|p| p.distance(endpoint))
        .ok_or(Error::EmptyLog)
}

/// RMS cross-track error derived from the ISE.
pub fn mean_error(ise: f64, duration: f64) -> f64 {
    if duration > 0.0 {
        (ise / duration).sqrt()
    } else {
        0.0
    }
}

/// `(1 - error^2) * (0.1 - mean^2 / 0.1 + bonus)` where the bonus is
/// the [`TimeTerm`] selected by `cfg.mode`.
pub fn evaluation_score(final_error: f64, mean_error: f64, time: f64, cfg: &EvalConfig) -> f64 {
    let bonus = match cfg.mode {
        TimeTerm::EarlyBonus => (cfg.ref_time - time) / 100.0,
        TimeTerm::LateBonus => (time - cfg.ref_time) / 100.0,
    };
    (1.0 - final_error * final_error) * (0.1 - mean_error * mean_error / 0.1 + bonus)
}

/// Mean clearance over the samples, and the mean over sensors of each
/// sensor's smallest reading during the run.
pub fn safety_metrics(log: &TrajectoryLog) -> Result<(f64, f64)> {
    let n_sensors = log
        .samples
        .iter()
        .map(|s| s.ranges.len())
        .max()
        .unwrap_or(0);
    if n_sensors == 0 {
        return Err(Error::NoSensorData);
    }
    let avg = log.samples.iter().map(|s| s.clearance).sum::<f64>() / log.samples.len() as f64;
    let mut minima = vec![f64::INFINITY; n_sensors];
    for s in &log.samples {
        for (m, r) in minima.iter_mut().zip(&s.ranges) {
            *m = m.min(*r);
        }
    }
    let min_avg = minima.iter().sum::<f64>() / n_sensors as f64;
    Ok((avg, min_avg))
}

/// Control-effort surrogate `sum (c_v v^2 + c_w w^2) T`.
pub fn energy_proxy(log: &TrajectoryLog, c_v: f64, c_w: f64) -> f64 {
    log.samples
        .iter()
        .map(|s| {
            (c_v * s.control.v * s.control.v + c_w * s.control.omega * s.control.omega)
                * log.sample_period
        })
        .sum()
}

/// Full report for one run.
///
/// The reference endpoint for the final error is the last reference point,
/// or the goal when no reference path is recorded. Without a reference path
/// the error integrals are zero.
pub fn compute_report(log: &TrajectoryLog, cfg: &ReportConfig) -> Result<MetricsReport> {
    let path_length = path_length(log)?;
    let time_to_goal = time_to_goal(log);
    let (ise, iae, itae) = match error_integrals(log) {
        Ok(sums) => sums,
        Err(Error::NoReference) => (0.0, 0.0, 0.0),
        Err(e) => return Err(e),
    };
    let endpoint = log
        .reference_path
        .as_ref()
        .and_then(|p| p.last().copied())
        .unwrap_or(cfg.goal);
    let final_error = final_error(log, endpoint)?;
    let mean_error = mean_error(ise, log.duration());
    let elapsed = log.samples.last().map_or(0.0, |s| s.t);
    let evaluation = evaluation_score(
        final_error,
        mean_error,
        time_to_goal.unwrap_or(elapsed),
        &cfg.eval,
    );
    let (avg, min_avg) = safety_metrics(log)?;
    Ok(MetricsReport {
        success: time_to_goal.is_some_and(|t| t <= cfg.time_limit),
        time_to_goal,
        path_length,
        control_periods: control_periods(log),
        ise,
        iae,
        itae,
        final_error,
        mean_error,
        evaluation,
        avg_obstacle_distance: avg,
        min_avg_obstacle_distance: min_avg,
        energy: energy_proxy(log, cfg.c_v, cfg.c_w),
        passages: narrow_passage_count(log),
    })
}
