//! The closed-loop experiment: one scenario, one controller, one seed.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use navbench_core::controllers::{
    heading_controller, wall_follow_step, PidGains, PidState, Side, WallFollowConfig,
    WallFollowState,
};
use navbench_core::dwa::{self, DwaConfig};
use navbench_core::exec::Exec;
use navbench_core::kinematics::{heading_error, step};
use navbench_core::metrics::{
    compute_report, TimeTerm, EvalConfig, MetricsReport, Outcome, ReportConfig, Sample,
    TrajectoryLog,
};
use navbench_core::rng::RunStreams;
use navbench_core::world::{perturb_control, RangeScan, Status, World};
use navbench_core::{Control, RobotParams, RobotState};
use serde::{Deserialize, Serialize};

use crate::scenario::{check_scenario, Scenario, WallSection};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerId {
    Dwa,
    Pid,
    Wall,
}

impl ControllerId {
    pub const ALL: [ControllerId; 3] = [ControllerId::Dwa, ControllerId::Pid, ControllerId::Wall];

    pub fn as_str(self) -> &'static str {
        match self {
            ControllerId::Dwa => "dwa",
            ControllerId::Pid => "pid",
            ControllerId::Wall => "wall",
        }
    }
}

impl fmt::Display for ControllerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ControllerId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownController(s.to_string()))
    }
}

/// Everything one run produced, plus what is needed to redraw and re-score it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub scenario: String,
    pub controller: ControllerId,
    pub seed: u64,
    pub world: World,
    pub report_config: ReportConfig,
    pub log: TrajectoryLog,
    pub report: MetricsReport,
}

/// Bug0-style wrapper: steer at the goal, follow the wall while the way to
/// the goal is blocked.
struct GoalOrWall {
    cfg: WallSection,
    following: bool,
    side: Side,
    wall: WallFollowState,
    pid: PidState,
}

/// Lateral offset of the nearest beam hit inside the strip of half-width
/// `half_width` running from the robot toward `bearing` and closer than
/// `reach`. Positive offsets lie to the left of the strip.
fn strip_hit(scan: &RangeScan, bearing: f64, half_width: f64, reach: f64) -> Option<f64> {
    scan.ranges
        .iter()
        .zip(&scan.beam_angles)
        .map(|(&r, &a)| (r * (a - bearing).cos(), r * (a - bearing).sin()))
        .filter(|&(fwd, lat)| fwd > 0.0 && fwd < reach && lat.abs() < half_width)
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, lat)| lat)
}

impl GoalOrWall {
    fn decide(
        &mut self,
        state: &RobotState,
        scan: &RangeScan,
        world: &World,
        params: &RobotParams,
        dt: f64,
    ) -> Result<Control> {
        let bearing = heading_error(state, world.goal)?;
        let dist = state.position().distance(world.goal);
        let half_width = self.cfg.follow.desired_distance.max(params.radius);
        if self.following {
            let clear = strip_hit(
                scan,
                bearing,
                half_width,
                self.cfg.follow.lost_threshold.min(dist),
            )
            .is_none();
            if clear && bearing.abs() < FRAC_PI_2 {
                self.following = false;
                self.pid = PidState::default();
            }
        } else if let Some(lat) = strip_hit(
            scan,
            bearing,
            half_width,
            self.cfg.follow.front_threshold.min(dist),
        ) {
            // Keep the obstacle on the side it was seen on.
            self.side = match lat.partial_cmp(&0.0) {
                Some(Ordering::Greater) => Side::Left,
                Some(Ordering::Less) => Side::Right,
                _ => self.cfg.follow.side,
            };
            self.following = true;
            self.wall = WallFollowState::default();
        }
        if self.following {
            let follow = WallFollowConfig {
                side: self.side,
                ..self.cfg.follow
            };
            let (c, next) = wall_follow_step(&follow, self.wall, scan, params, dt)?;
            self.wall = next;
            Ok(c)
        } else {
            let (c, next) = heading_controller(
                &self.cfg.goal_gains,
                self.pid,
                state,
                world.goal,
                self.cfg.follow.v0,
                dt,
                params,
            )?;
            self.pid = next;
            Ok(c)
        }
    }
}

enum Driver {
    Pid {
        gains: PidGains,
        v0: f64,
        st: PidState,
    },
    Dwa {
        cfg: DwaConfig,
        weights: dwa::DwaWeights,
    },
    Wall(GoalOrWall),
}

impl Driver {
    fn new(scenario: &Scenario, id: ControllerId) -> Result<Self> {
        let ctl = &scenario.controller;
        let missing = || {
            Error::Validation(vec![format!(
                "controller.{id}: required to run the {id} controller"
            )])
        };
        Ok(match id {
            ControllerId::Pid => {
                let p = ctl.pid.ok_or_else(missing)?;
                Driver::Pid {
                    gains: p.gains,
                    v0: p.v0,
                    st: PidState::default(),
                }
            }
            ControllerId::Dwa => {
                let d = ctl.dwa.ok_or_else(missing)?;
                Driver::Dwa {
                    cfg: DwaConfig {
                        period_t: ctl.period,
                        ..d.cfg
                    },
                    weights: d.weights,
                }
            }
            ControllerId::Wall => Driver::Wall(GoalOrWall {
                cfg: ctl.wall.ok_or_else(missing)?,
                following: false,
                side: ctl.wall.map_or(Side::Left, |w| w.follow.side),
                wall: WallFollowState::default(),
                pid: PidState::default(),
            }),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn decide(
        &mut self,
        exec: Exec,
        state: &RobotState,
        current: Control,
        scan: &RangeScan,
        world: &World,
        params: &RobotParams,
        dt: f64,
    ) -> Result<Control> {
        match self {
            Driver::Pid { gains, v0, st } => {
                let (c, next) = heading_controller(gains, *st, state, world.goal, *v0, dt, params)?;
                *st = next;
                Ok(c)
            }
            Driver::Dwa { cfg, weights } => Ok(dwa::plan_with(
                exec, state, current, world.goal, world, params, cfg, weights,
            )),
            Driver::Wall(w) => w.decide(state, scan, world, params, dt),
        }
    }
}

pub fn run_scenario(
    scenario: &Scenario,
    name: &str,
    controller: ControllerId,
    seed: u64,
    mode: TimeTerm,
) -> Result<RunRecord> {
    run_scenario_with(Exec::default(), scenario, name, controller, seed, mode)
}

/// Runs the fixed-period loop until the goal is reached, the body collides
/// or the time limit passes.
///
/// Each tick at `t = k * period`: check status, scan, decide, perturb, log,
/// integrate. The terminal tick logs the final pose with a zero command.
pub fn run_scenario_with(
    exec: Exec,
    scenario: &Scenario,
    name: &str,
    controller: ControllerId,
    seed: u64,
    mode: TimeTerm,
) -> Result<RunRecord> {
    let violations = check_scenario(scenario);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let mut driver = Driver::new(scenario, controller)?;
    let world = &scenario.world;
    let sensor = &scenario.sensor;
    let params = scenario.params;
    let period = scenario.controller.period;
    let mut streams = RunStreams::new(seed ^ sensor.seed);
    let mut state = RobotState::new(scenario.start.x, scenario.start.y, scenario.start.theta);
    let mut applied = Control::STOP;
    let mut samples = Vec::new();
    let mut passages = Vec::new();
    let mut decisions = 0u64;
    let mut k = 0u64;

    let outcome = loop {
        let t = k as f64 * period;
        let terminal = match world.status(&state, params.radius) {
            Status::Collided => Some(Outcome::Collided),
            Status::Reached => Some(Outcome::Reached),
            Status::Running if t > scenario.time_limit => Some(Outcome::Timeout),
            Status::Running => None,
        };
        let scan = match world.scan(&state, sensor, &mut streams.sensor) {
            Ok(scan) => scan,
            // Only a collided pose can have left the arena.
            Err(_) if terminal.is_some() => RangeScan {
                ranges: vec![0.0; sensor.n_beams],
                beam_angles: sensor.beam_angles(),
            },
            Err(e) => return Err(e.into()),
        };
        let clearance = world.clearance(state.position(), params.radius, sensor.max_range);
        if let Some(outcome) = terminal {
            samples.push(Sample {
                t,
                state,
                control: Control::STOP,
                clearance,
                ranges: scan.ranges,
            });
            break outcome;
        }
        let command = driver.decide(exec, &state, applied, &scan, world, &params, period)?;
        decisions += 1;
        let command = perturb_control(
            command,
            scenario.noise.sigma_v,
            scenario.noise.sigma_w,
            &params,
            &mut streams.actuation,
        );
        samples.push(Sample {
            t,
            state,
            control: command,
            clearance,
            ranges: scan.ranges,
        });
        let next = step(state, command, period)?;
        passages.extend(
            world
                .gates_crossed(state.position(), next.position())
                .map(String::from),
        );
        state = next;
        applied = command;
        k += 1;
    };

    let log = TrajectoryLog {
        sample_period: period,
        samples,
        outcome,
        planner_decisions: decisions,
        passages_crossed: passages,
        reference_path: scenario.reference(),
    };
    let report_config = ReportConfig {
        goal: world.goal,
        time_limit: scenario.time_limit,
        eval: EvalConfig {
            ref_time: scenario.ref_time,
            mode,
        },
        c_v: scenario.energy.c_v,
        c_w: scenario.energy.c_w,
    };
    let report = compute_report(&log, &report_config)?;
    Ok(RunRecord {
        scenario: name.to_string(),
        controller,
        seed,
        world: world.clone(),
        report_config,
        log,
        report,
    })
}
