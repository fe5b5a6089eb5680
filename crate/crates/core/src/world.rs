//! Static 2D environment: bounds, disc and segment obstacles, goal, declared
//! narrow-passage gates, plus range sensing and collision queries.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::geometry::{point_segment_distance, segments_intersect};
use crate::kinematics::{clamp_control, step};
use crate::rng::SimRng;
use crate::{Control, Error, Point, Result, RobotParams, RobotState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: Point,
    pub max: Point,
}

impl Bounds {
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Distance from an interior point to the nearest edge.
    pub fn inner_distance(&self, p: Point) -> f64 {
        (p.x - self.min.x)
            .min(self.max.x - p.x)
            .min(p.y - self.min.y)
            .min(self.max.y - p.y)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Obstacle {
    Circle { center: Point, radius: f64 },
    Segment { a: Point, b: Point },
}

impl Obstacle {
    /// Distance from `p` to the obstacle surface, zero inside a disc.
    pub fn distance(&self, p: Point) -> f64 {
        match *self {
            Obstacle::Circle { center, radius } => (p.distance(center) - radius).max(0.0),
            Obstacle::Segment { a, b } => point_segment_distance(p, a, b),
        }
    }

    /// First hit of the ray `origin + t * dir` with `t` in `[0, inf)`.
    fn ray_hit(&self, origin: Point, dir: (f64, f64)) -> Option<f64> {
        match *self {
            Obstacle::Circle { center, radius } => {
                let (ox, oy) = (origin.x - center.x, origin.y - center.y);
                let c = ox * ox + oy * oy - radius * radius;
                if c <= 0.0 {
                    return Some(0.0);
                }
                let b = ox * dir.0 + oy * dir.1;
                let disc = b * b - c;
                if disc < 0.0 {
                    return None;
                }
                let t = -b - disc.sqrt();
                (t >= 0.0).then_some(t)
            }
            Obstacle::Segment { a, b } => ray_segment(origin, dir, a, b),
        }
    }
}

fn ray_segment(origin: Point, dir: (f64, f64), a: Point, b: Point) -> Option<f64> {
    let (ex, ey) = (b.x - a.x, b.y - a.y);
    let (wx, wy) = (a.x - origin.x, a.y - origin.y);
    let denom = dir.0 * ey - dir.1 * ex;
    if denom.abs() < 1e-15 {
        // Parallel: only a collinear overlap can be hit.
        if (wx * dir.1 - wy * dir.0).abs() > 1e-12 {
            return None;
        }
        let ta = wx * dir.0 + wy * dir.1;
        let tb = (b.x - origin.x) * dir.0 + (b.y - origin.y) * dir.1;
        let (lo, hi) = (ta.min(tb), ta.max(tb));
        return (hi >= 0.0).then_some(lo.max(0.0));
    }
    let t = (wx * ey - wy * ex) / denom;
    let s = (wx * dir.1 - wy * dir.0) / denom;
    (t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&s)).then_some(t)
}

/// A declared narrow passage, counted when the robot path crosses it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub id: String,
    pub a: Point,
    pub b: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub bounds: Bounds,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    pub goal: Point,
    pub goal_radius: f64,
    #[serde(default)]
    pub narrow_passages: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Running,
    Reached,
    Collided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorConfig {
    pub n_beams: usize,
    pub fov: f64,
    pub max_range: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    /// Salt mixed into the run seed for the sensor stream.
    #[serde(default)]
    pub seed: u64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            n_beams: 9,
            fov: std::f64::consts::PI,
            max_range: 5.0,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl SensorConfig {
    /// Beam directions in the robot frame, evenly spaced and centered on the
    /// heading. A full-circle field of view does not repeat its end beam.
    pub fn beam_angles(&self) -> Vec<f64> {
        match self.n_beams {
            0 => Vec::new(),
            1 => vec![0.0],
            n if self.fov >= TAU => (0..n)
                .map(|i| -0.5 * self.fov + i as f64 * self.fov / n as f64)
                .collect(),
            n => (0..n)
                .map(|i| -0.5 * self.fov + i as f64 * self.fov / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeScan {
    pub ranges: Vec<f64>,
    pub beam_angles: Vec<f64>,
}

impl RangeScan {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    /// Index of the beam whose angle is closest to `angle`.
    pub fn nearest_beam(&self, angle: f64) -> Option<usize> {
        self.beam_angles
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - angle).abs().total_cmp(&(b.1 - angle).abs()))
            .map(|(i, _)| i)
    }
}

impl World {
    /// An obstacle-free world.
    pub fn empty(bounds: Bounds, goal: Point, goal_radius: f64) -> Self {
        Self {
            bounds,
            obstacles: Vec::new(),
            goal,
            goal_radius,
            narrow_passages: Vec::new(),
        }
    }

    fn boundary_segments(&self) -> [(Point, Point); 4] {
        let Bounds { min, max } = self.bounds;
        let (a, b, c, d) = (min, Point::new(max.x, min.y), max, Point::new(min.x, max.y));
        [(a, b), (b, c), (c, d), (d, a)]
    }

    /// Distance along the ray to the first obstacle or boundary, capped at
    /// `max_range`.
    pub fn raycast(&self, origin: Point, angle: f64, max_range: f64) -> Result<f64> {
        if !self.bounds.contains(origin) {
            return Err(Error::OutOfBounds(origin.x, origin.y));
        }
        let dir = (angle.cos(), angle.sin());
        let walls = self
            .boundary_segments()
            .into_iter()
            .filter_map(|(a, b)| ray_segment(origin, dir, a, b));
        let hit = self
            .obstacles
            .iter()
            .filter_map(|o| o.ray_hit(origin, dir))
            .chain(walls)
            .fold(max_range, f64::min);
        Ok(hit.clamp(0.0, max_range.max(0.0)))
    }

    /// One noisy range scan. With `noise_sigma == 0` no random numbers are
    /// drawn and every beam equals its ray cast.
    pub fn scan(
        &self,
        pose: &RobotState,
        cfg: &SensorConfig,
        rng: &mut SimRng,
    ) -> Result<RangeScan> {
        let beam_angles = cfg.beam_angles();
        let ranges = beam_angles
            .iter()
            .map(|&a| {
                let r = self.raycast(pose.position(), pose.theta + a, cfg.max_range)?;
                Ok(if cfg.noise_sigma > 0.0 {
                    (r + rng.gaussian(cfg.noise_sigma)).clamp(0.0, cfg.max_range)
                } else {
                    r
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RangeScan {
            ranges,
            beam_angles,
        })
    }

    /// Distance from `p` to the nearest obstacle surface or boundary edge.
    /// Negative outside the bounds.
    pub fn nearest_distance(&self, p: Point) -> f64 {
        let wall = if self.bounds.contains(p) {
            self.bounds.inner_distance(p)
        } else {
            -1.0
        };
        self.obstacles
            .iter()
            .map(|o| o.distance(p))
            .fold(wall, f64::min)
    }

    /// Whether a body disc of `radius` centered at `p` touches an obstacle or
    /// leaves the bounds.
    pub fn collides(&self, p: Point, radius: f64) -> bool {
        self.nearest_distance(p) < radius
    }

    /// Gap between the body disc and the nearest obstacle or wall, floored at
    /// zero and capped at `cap`.
    pub fn clearance(&self, p: Point, radius: f64, cap: f64) -> f64 {
        (self.nearest_distance(p) - radius).clamp(0.0, cap)
    }

    /// Arc length the body can travel along the constant `(v, omega)` path
    /// before it first touches an obstacle, capped at `s_max`.
    ///
    /// The path is sampled every `min(radius/2, 0.05)` m. The collision test
    /// inflates the body by the chord sagitta of that spacing, so the body is
    /// also free between accepted samples. The first blocked interval is
    /// refined by bisection. In-place rotation has nothing in its way unless
    /// the body already collides.
    pub fn arc_clearance(
        &self,
        state: &RobotState,
        v: f64,
        omega: f64,
        params: &RobotParams,
        s_max: f64,
    ) -> f64 {
        let s_max = s_max.max(0.0);
        let ds = (0.5 * params.radius).min(0.05);
        let inflated = params.radius + sagitta(params.radius, ds) + 1e-12;
        if self.collides(state.position(), inflated) {
            return 0.0;
        }
        if v == 0.0 || s_max == 0.0 {
            return s_max;
        }
        let speed = v.abs();
        let control = Control::new(v, omega);
        let pose_at = |s: f64| step(*state, control, s / speed).map_or(*state, |p| p);
        // A full circle retraces itself.
        let limit = if omega.abs() > 1e-12 {
            s_max.min(TAU * speed / omega.abs() + ds)
        } else {
            s_max
        };
        // Samples sit on a fixed ds lattice independent of the cap, so a
        // larger cap never yields a smaller result.
        let mut k = 0u32;
        loop {
            let (lo_s, hi_s) = (f64::from(k) * ds, f64::from(k + 1) * ds);
            if self.collides(pose_at(hi_s).position(), inflated) {
                let (mut lo, mut hi) = (lo_s, hi_s);
                for _ in 0..30 {
                    let mid = 0.5 * (lo + hi);
                    if self.collides(pose_at(mid).position(), inflated) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return lo.min(s_max);
            }
            if hi_s >= limit {
                return s_max;
            }
            k += 1;
        }
    }

    pub fn status(&self, pose: &RobotState, radius: f64) -> Status {
        let p = pose.position();
        if self.collides(p, radius) {
            Status::Collided
        } else if p.distance(self.goal) <= self.goal_radius {
            Status::Reached
        } else {
            Status::Running
        }
    }

    /// Ids of the gates crossed by the straight move `from` -> `to`.
    pub fn gates_crossed(&self, from: Point, to: Point) -> impl Iterator<Item = &str> {
        self.narrow_passages
            .iter()
            .filter(move |g| segments_intersect(from, to, g.a, g.b))
            .map(|g| g.id.as_str())
    }
}

/// Largest gap between a chord of length `ds` and a circle of radius `r`
/// whose ends lie on it.
fn sagitta(r: f64, ds: f64) -> f64 {
    let half = 0.5 * ds;
    if half >= r {
        r
    } else {
        r - (r * r - half * half).sqrt()
    }
}

/// Adds independent Gaussian noise to both command components, then clamps
/// to the robot limits. Zero sigmas draw nothing.
pub fn perturb_control(
    control: Control,
    sigma_v: f64,
    sigma_w: f64,
    params: &RobotParams,
    rng: &mut SimRng,
) -> Control {
    let mut out = control;
    if sigma_v > 0.0 {
        out.v += rng.gaussian(sigma_v);
    }
    if sigma_w > 0.0 {
        out.omega += rng.gaussian(sigma_w);
    }
    clamp_control(out, params)
}
