//! Scenario files and their validation.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use navbench_core::controllers::{wall_follow_step, PidGains, WallFollowConfig, WallFollowState};
use navbench_core::dwa::{DwaConfig, DwaWeights};
use navbench_core::world::{Obstacle, RangeScan, SensorConfig, World};
use navbench_core::{Point, RobotParams, RobotState};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Noise {
    #[serde(default)]
    pub sigma_v: f64,
    #[serde(default)]
    pub sigma_w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyWeights {
    pub c_v: f64,
    pub c_w: f64,
}

impl Default for EnergyWeights {
    fn default() -> Self {
        Self { c_v: 1.0, c_w: 1.0 }
    }
}

/// Heading PID toward the goal at constant speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PidSection {
    pub gains: PidGains,
    pub v0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DwaSection {
    #[serde(default)]
    pub weights: DwaWeights,
    #[serde(default)]
    pub cfg: DwaConfig,
}

/// Goal seeking that falls back to wall following when the way to the goal
/// is blocked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallSection {
    pub follow: WallFollowConfig,
    pub goal_gains: PidGains,
}

/// Controller settings. `period` is the decision period shared by every
/// controller; it replaces the DWA `period_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerSection {
    pub period: f64,
    #[serde(default)]
    pub pid: Option<PidSection>,
    #[serde(default)]
    pub dwa: Option<DwaSection>,
    #[serde(default)]
    pub wall: Option<WallSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub world: World,
    pub sensor: SensorConfig,
    pub start: RobotState,
    pub params: RobotParams,
    pub time_limit: f64,
    pub ref_time: f64,
    pub controller: ControllerSection,
    pub noise: Noise,
    /// Absent: the straight segment from start to goal. Empty: no reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_path: Option<Vec<Point>>,
    #[serde(default)]
    pub energy: EnergyWeights,
}

impl Scenario {
    pub fn reference(&self) -> Option<Vec<Point>> {
        match &self.reference_path {
            None => Some(vec![self.start.position(), self.world.goal]),
            Some(p) if p.is_empty() => None,
            Some(p) => Some(p.clone()),
        }
    }

    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let violations = check_value(&value);
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// File stem unless the document names itself.
    pub fn id_or(&self, path: &Path) -> String {
        self.id.clone().unwrap_or_else(|| {
            path.file_stem().map_or_else(
                || "scenario".to_string(),
                |s| s.to_string_lossy().into_owned(),
            )
        })
    }
}

/// Reads `path` and lists every violation. An empty list means the scenario
/// is valid. Unreadable or non-JSON files are a [`Error::Parse`].
pub fn validate_scenario(path: &Path) -> Result<Vec<String>> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(check_value(&value))
}

/// Violations of an in-memory scenario.
pub fn check_scenario(scenario: &Scenario) -> Vec<String> {
    match serde_json::to_value(scenario) {
        Ok(v) => check_value(&v),
        Err(e) => vec![format!("scenario: {e}")],
    }
}

struct Checker<'a> {
    root: &'a Value,
    out: Vec<String>,
}

impl<'a> Checker<'a> {
    fn get(&self, path: &str) -> Option<&'a Value> {
        path.split('.').try_fold(self.root, |v, key| v.get(key))
    }

    fn required(&mut self, path: &str) -> Option<&'a Value> {
        let v = self.get(path);
        if v.is_none() {
            self.out.push(format!("{path}: required"));
        }
        v
    }

    fn number(&mut self, path: &str) -> Option<f64> {
        let v = self.required(path)?;
        match v.as_f64() {
            Some(x) => Some(x),
            None => {
                self.out.push(format!("{path}: must be a number"));
                None
            }
        }
    }

    fn positive(&mut self, path: &str) -> Option<f64> {
        let x = self.number(path)?;
        if x > 0.0 {
            Some(x)
        } else {
            self.out.push(format!("{path}: must be positive"));
            None
        }
    }

    fn non_negative_opt(&mut self, path: &str) {
        if let Some(v) = self.get(path) {
            if !v.as_f64().is_some_and(|x| x >= 0.0) {
                self.out.push(format!("{path}: must be non-negative"));
            }
        }
    }

    fn point(&mut self, path: &str) -> Option<Point> {
        let v = self.required(path)?;
        match serde_json::from_value::<Point>(v.clone()) {
            Ok(p) => Some(p),
            Err(_) => {
                self.out.push(format!("{path}: must be an [x, y] pair"));
                None
            }
        }
    }

    /// Typed view of a section; a deserialization failure is one violation.
    fn typed<T: for<'de> Deserialize<'de>>(&mut self, path: &str, v: &Value) -> Option<T> {
        match serde_json::from_value(v.clone()) {
            Ok(t) => Some(t),
            Err(e) => {
                self.out.push(format!("{path}: {e}"));
                None
            }
        }
    }

    fn section<T: for<'de> Deserialize<'de>>(&mut self, path: &str) -> Option<T> {
        let v = self.required(path)?;
        self.typed(path, v)
    }

    fn prefixed(&mut self, path: &str, violations: Vec<&'static str>) {
        self.out
            .extend(violations.into_iter().map(|m| format!("{path}.{m}")));
    }
}

fn check_value(root: &Value) -> Vec<String> {
    let mut c = Checker {
        root,
        out: Vec::new(),
    };
    if !root.is_object() {
        return vec!["scenario: must be an object".into()];
    }

    let min = c.point("world.bounds.min");
    let max = c.point("world.bounds.max");
    if let (Some(a), Some(b)) = (min, max) {
        if !(a.x < b.x && a.y < b.y) {
            c.out
                .push("world.bounds: min must be below and left of max".into());
        }
    }
    let goal = c.point("world.goal");
    c.positive("world.goal_radius");
    let mut obstacles = Vec::new();
    if let Some(list) = c.get("world.obstacles") {
        match list.as_array() {
            Some(items) => {
                for (i, item) in items.iter().enumerate() {
                    let path = format!("world.obstacles[{i}]");
                    if let Some(o) = c.typed::<Obstacle>(&path, item) {
                        if let Obstacle::Circle { radius, .. } = o {
                            if !(radius > 0.0) {
                                c.out.push(format!("{path}.radius: must be positive"));
                            }
                        }
                        obstacles.push(o);
                    }
                }
            }
            None => c.out.push("world.obstacles: must be a list".into()),
        }
    }
    if let Some(gates) = c.get("world.narrow_passages") {
        c.typed::<Vec<navbench_core::world::Gate>>("world.narrow_passages", gates);
    }

    let sensor: Option<SensorConfig> = c.section("sensor");
    if let Some(s) = &sensor {
        if s.n_beams == 0 {
            c.out.push("sensor.n_beams: must be positive".into());
        }
        if !(s.fov > 0.0 && s.fov <= 2.0 * PI) {
            c.out.push("sensor.fov: must be in (0, 2pi]".into());
        }
        if !(s.max_range > 0.0 && s.max_range.is_finite()) {
            c.out.push("sensor.max_range: must be positive".into());
        }
        if !(s.noise_sigma >= 0.0) {
            c.out
                .push("sensor.noise_sigma: must be non-negative".into());
        }
    }

    let start: Option<RobotState> = c.section("start");
    let params: Option<RobotParams> = c.section("params");
    if let Some(p) = &params {
        c.out.extend(
            p.violations()
                .into_iter()
                .map(|n| format!("params.{n}: must be positive")),
        );
    }
    c.positive("time_limit");
    c.positive("ref_time");
    c.required("noise");
    c.non_negative_opt("noise.sigma_v");
    c.non_negative_opt("noise.sigma_w");
    if let Some(e) = c.get("energy") {
        c.typed::<EnergyWeights>("energy", e);
    }
    if let Some(r) = c.get("reference_path") {
        c.typed::<Vec<Point>>("reference_path", r);
    }

    let period = c.positive("controller.period");
    let controller: Option<ControllerSection> = c.section("controller");
    if let Some(ctl) = &controller {
        if ctl.pid.is_none() && ctl.dwa.is_none() && ctl.wall.is_none() {
            c.out
                .push("controller: needs at least one of pid, dwa, wall".into());
        }
        if let Some(pid) = &ctl.pid {
            if !pid.gains.is_finite() {
                c.out.push("controller.pid.gains: must be finite".into());
            }
            if !pid.v0.is_finite() {
                c.out.push("controller.pid.v0: must be finite".into());
            }
        }
        if let Some(dwa) = &ctl.dwa {
            c.prefixed("controller.dwa.weights", dwa.weights.violations());
            let cfg = DwaConfig {
                period_t: period.unwrap_or(dwa.cfg.period_t),
                ..dwa.cfg
            };
            c.prefixed("controller.dwa.cfg", cfg.violations());
        }
        if let Some(wall) = &ctl.wall {
            c.prefixed("controller.wall.follow", wall.follow.violations());
            if !wall.goal_gains.is_finite() {
                c.out
                    .push("controller.wall.goal_gains: must be finite".into());
            }
            if let Some(s) = &sensor {
                if wall.follow.lost_threshold > s.max_range {
                    c.out.push(
                        "controller.wall.follow.lost_threshold: must not exceed sensor.max_range"
                            .into(),
                    );
                }
                let usable = params.as_ref().filter(|p| p.violations().is_empty());
                if let (Some(p), Some(t), true) = (usable, period, s.n_beams > 0 && s.fov > 0.0) {
                    let scan = RangeScan {
                        ranges: vec![s.max_range; s.n_beams],
                        beam_angles: s.beam_angles(),
                    };
                    if wall_follow_step(&wall.follow, WallFollowState::default(), &scan, p, t)
                        .is_err()
                    {
                        c.out.push(
                            "sensor: beams must cover front, diagonal and side for wall following"
                                .into(),
                        );
                    }
                }
            }
        }
    }

    if let (Some(start), Some(min), Some(max), Some(p)) = (start, min, max, &params) {
        if !start.is_finite() {
            c.out.push("start: must be finite".into());
        } else {
            let world = World {
                bounds: navbench_core::world::Bounds { min, max },
                obstacles,
                goal: goal.unwrap_or(start.position()),
                goal_radius: 0.0,
                narrow_passages: Vec::new(),
            };
            if !world.bounds.contains(start.position()) {
                c.out.push("start: must lie inside world.bounds".into());
            } else if world.collides(start.position(), p.radius) {
                c.out
                    .push("start: robot body overlaps an obstacle or the bounds".into());
            }
        }
    }
    if let (Some(g), Some(min), Some(max)) = (goal, min, max) {
        if !(g.x > min.x && g.x < max.x && g.y > min.y && g.y < max.y) {
            c.out
                .push("world.goal: must lie inside world.bounds".into());
        }
    }
    c.out
}
