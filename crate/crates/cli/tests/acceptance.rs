//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs as a plain binary (`harness = false`) so the report is printed on
//! every `cargo test`. Each check compares the implementation against an
//! oracle written here from first principles.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::sample;
use navbench::fxcheck::run_fxcheck;
use navbench::record::{read_jsonl, to_csv, to_jsonl};
use navbench::{run_scenario, ControllerId, Scenario};
use navbench_core::controllers::{pid_step, triangle_height, PidGains, PidState};
use navbench_core::dwa::{self, DwaConfig, DwaWeights, TIE_EPS};
use navbench_core::fxp::{fx_pid_step, Fx, FxPidGains, FxPidState, FxStep};
use navbench_core::kinematics::{step, wrap_angle};
use navbench_core::metrics::{
    error_integrals, evaluation_score, final_error, success_rate, Attempt, TimeTerm, EvalConfig,
    Outcome, Sample, TrajectoryLog,
};
use navbench_core::rng::SimRng;
use navbench_core::world::{Bounds, Obstacle, World};
use navbench_core::{Control, Point, RobotParams, RobotState};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || {
        format!(
            "{what} took {:.2}s, limit {limit_s}s",
            elapsed.as_secs_f64()
        )
    })
}

// ---------------------------------------------------------------------------
// 1. DWA against exhaustive enumeration

fn oracle_params() -> RobotParams {
    RobotParams {
        v_max: 1.0,
        omega_max: 1.5,
        accel_v: 1.5,
        accel_omega: 3.0,
        brake_v: 1.0,
        brake_omega: 2.0,
        radius: 0.2,
        wheel_base: 0.3,
    }
}

fn random_world(rng: &mut SimRng) -> World {
    let goal = Point::new(rng.uniform_in(1.0, 7.0), rng.uniform_in(-4.0, 4.0));
    let mut world = World::empty(
        Bounds {
            min: Point::new(-8.0, -8.0),
            max: Point::new(8.0, 8.0),
        },
        goal,
        0.2,
    );
    let n = 3 + (rng.next_u64() % 10) as usize;
    for _ in 0..n {
        let obstacle = if rng.uniform() < 0.7 {
            Obstacle::Circle {
                center: Point::new(rng.uniform_in(-5.0, 7.0), rng.uniform_in(-5.0, 5.0)),
                radius: rng.uniform_in(0.1, 0.8),
            }
        } else {
            let a = Point::new(rng.uniform_in(-5.0, 7.0), rng.uniform_in(-5.0, 5.0));
            let heading = rng.uniform_in(-PI, PI);
            let len = rng.uniform_in(0.5, 3.0);
            Obstacle::Segment {
                a,
                b: Point::new(a.x + len * heading.cos(), a.y + len * heading.sin()),
            }
        };
        if obstacle.distance(Point::new(0.0, 0.0)) > rng.uniform_in(0.2, 0.6) {
            world.obstacles.push(obstacle);
        }
    }
    world
}

/// Enumerates the grid, scores every sample and picks the winner by a plain
/// linear scan.
fn brute_force_dwa(
    state: &RobotState,
    current: Control,
    world: &World,
    p: &RobotParams,
    cfg: &DwaConfig,
    w: &DwaWeights,
) -> Control {
    let t = cfg.period_t;
    let v_lo = (if cfg.allow_reverse { -p.v_max } else { 0.0 }).max(current.v - p.accel_v * t);
    let v_hi = p.v_max.min(current.v + p.accel_v * t);
    let w_lo = (-p.omega_max).max(current.omega - p.accel_omega * t);
    let w_hi = p.omega_max.min(current.omega + p.accel_omega * t);
    if v_lo > v_hi || w_lo > w_hi {
        return Control::STOP;
    }
    let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64 / (n - 1) as f64)
                }
            })
            .collect()
    };
    let steps = (cfg.horizon / cfg.dt_rollout + 1e-9).floor() as usize;

    let mut scored: Vec<(f64, f64, f64)> = Vec::new();
    for &v in &axis(v_lo, v_hi, cfg.n_v) {
        for &om in &axis(w_lo, w_hi, cfg.n_w) {
            let clearance = world.arc_clearance(state, v, om, p, cfg.clearance_cap);
            let room = (clearance - v.abs() * t).max(0.0);
            if v.abs() > (2.0 * room * p.brake_v).sqrt()
                || om.abs() > (2.0 * room * p.brake_omega).sqrt()
            {
                continue;
            }
            let mut end = *state;
            let mut in_goal = false;
            for k in 1..=steps {
                end = step(*state, Control::new(v, om), k as f64 * cfg.dt_rollout).unwrap();
                in_goal |= end.position().distance(world.goal) <= world.goal_radius;
            }
            let heading = if in_goal {
                1.0
            } else {
                let (dx, dy) = (world.goal.x - end.x, world.goal.y - end.y);
                if dx.hypot(dy) <= 1e-9 {
                    1.0
                } else {
                    1.0 - wrap_angle(dy.atan2(dx) - end.theta).abs() / PI
                }
            };
            let score = w.alpha * heading
                + w.beta_w * (clearance.min(cfg.clearance_cap) / cfg.clearance_cap)
                + w.gamma * (v / p.v_max);
            scored.push((score, v, om));
        }
    }
    let Some(best) = scored.iter().map(|s| s.0).reduce(f64::max) else {
        return Control::STOP;
    };
    let mut pick: Option<(f64, f64)> = None;
    for &(score, v, om) in &scored {
        if score < best - TIE_EPS {
            continue;
        }
        let better = match pick {
            None => true,
            Some((pv, pw)) => om.abs() < pw.abs() || (om.abs() == pw.abs() && v < pv),
        };
        if better {
            pick = Some((v, om));
        }
    }
    let (v, om) = pick.unwrap();
    Control::new(v, om)
}

fn dwa_oracle() -> Check {
    let p = oracle_params();
    let cfg = DwaConfig {
        n_v: 9,
        n_w: 15,
        horizon: 2.0,
        ..DwaConfig::default()
    };
    let weights = DwaWeights {
        alpha: 0.6,
        beta_w: 0.25,
        gamma: 0.15,
    };
    let mut rng = SimRng::new(0xD1A);
    let began = Instant::now();
    let mut stops = 0;
    for world_ix in 0..100 {
        let mut world = random_world(&mut rng);
        let state = RobotState::new(0.0, 0.0, rng.uniform_in(-PI, PI));
        let mut current = Control::new(
            rng.uniform_in(0.0, p.v_max),
            rng.uniform_in(-p.omega_max, p.omega_max),
        );
        if world_ix % 4 == 0 {
            // Fast toward a long wall 5 cm past the body: no way to brake in time.
            let (s, c) = state.theta.sin_cos();
            let mid = Point::new(0.25 * c, 0.25 * s);
            world.obstacles.push(Obstacle::Segment {
                a: Point::new(mid.x - 3.0 * s, mid.y + 3.0 * c),
                b: Point::new(mid.x + 3.0 * s, mid.y - 3.0 * c),
            });
            current.v = rng.uniform_in(0.6, p.v_max);
        }
        let got = dwa::plan(&state, current, world.goal, &world, &p, &cfg, &weights);
        let want = brute_force_dwa(&state, current, &world, &p, &cfg, &weights);
        ensure(got == want, || {
            format!("world {world_ix}: plan {got:?}, oracle {want:?}")
        })?;
        stops += usize::from(got == Control::STOP);
    }
    within(began.elapsed(), 10.0, "100 worlds")?;
    Ok(format!(
        "100 worlds identical ({stops} STOP) in {:.2}s",
        began.elapsed().as_secs_f64()
    ))
}

// ---------------------------------------------------------------------------
// 2. PID against a direct discrete sum

fn pid_oracle() -> Check {
    let mut rng = SimRng::new(0x91D);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let gains = PidGains::new(
            rng.uniform_in(0.0, 10.0),
            rng.uniform_in(0.0, 5.0),
            rng.uniform_in(0.0, 2.0),
        );
        let gains = if case % 2 == 0 {
            gains.with_i_clamp(rng.uniform_in(0.05, 2.0))
        } else {
            gains
        };
        let bound = gains.i_clamp.unwrap_or(f64::INFINITY);
        let dt = rng.uniform_in(0.01, 0.5);
        let errors: Vec<f64> = (0..50).map(|_| rng.uniform_in(-PI, PI)).collect();

        let mut st = PidState::default();
        let mut sum = 0.0f64;
        for (n, &e) in errors.iter().enumerate() {
            let (u, next) = pid_step(&gains, st, e, dt).map_err(|err| err.to_string())?;
            st = next;
            sum = (sum + dt * e).max(-bound).min(bound);
            let slope = if n == 0 {
                0.0
            } else {
                (e - errors[n - 1]) / dt
            };
            let want = gains.kp * e + gains.ki * sum + gains.kd * slope;
            let dev = (u - want).abs();
            worst = worst.max(dev);
            ensure(dev <= 1e-12, || {
                format!("case {case} step {n}: {u} vs {want}")
            })?;
        }
    }
    Ok(format!(
        "1000 sequences x 50 steps, max deviation {worst:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 3. Triangulated wall distance

fn triangulation() -> Check {
    let h = triangle_height(3.0, 4.0, PI / 2.0).map_err(|e| e.to_string())?;
    ensure((h - 2.4).abs() <= 1e-12, || format!("3-4-5 height {h}"))?;
    let mut rng = SimRng::new(0x7121);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let a = rng.uniform_in(0.1, 5.0);
        let b = rng.uniform_in(0.1, 5.0);
        let beta = rng.uniform_in(0.05, PI - 0.05);
        let h = triangle_height(a, b, beta).map_err(|e| format!("case {case}: {e}"))?;
        let c = (a * a + b * b - 2.0 * a * b * beta.cos()).sqrt();
        let dev = (c * h / 2.0 - a * b * beta.sin() / 2.0).abs();
        worst = worst.max(dev);
        ensure(dev <= 1e-12, || {
            format!("case {case}: area mismatch {dev:e}")
        })?;
    }
    Ok(format!(
        "3-4-5 gives {h}, 1000 triangles max area deviation {worst:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 4. Straight line in an empty world

fn straight_line() -> Check {
    let s = sample("open_field");
    ensure(s.world.obstacles.is_empty(), || {
        "open_field has obstacles".into()
    })?;
    let mut parts = Vec::new();
    for c in [ControllerId::Pid, ControllerId::Dwa] {
        let began = Instant::now();
        let r = run_scenario(&s, "open_field", c, 0, TimeTerm::EarlyBonus).map_err(|e| e.to_string())?;
        let took = began.elapsed();
        within(took, 1.0, c.as_str())?;
        ensure(r.report.path_length <= 5.05, || {
            format!("{c}: path {}", r.report.path_length)
        })?;
        ensure(r.report.final_error <= 0.1, || {
            format!("{c}: final error {}", r.report.final_error)
        })?;
        parts.push(format!(
            "{c} path {:.4} error {:.4} ({:.0} ms)",
            r.report.path_length,
            r.report.final_error,
            took.as_secs_f64() * 1e3
        ));
    }
    Ok(parts.join(", "))
}

// ---------------------------------------------------------------------------
// 5. Safety over seeded obstacle fields

fn obstacle_scenario(seed: u64) -> Scenario {
    let mut s = sample("clutter");
    s.noise.sigma_v = 0.0;
    s.noise.sigma_w = 0.0;
    s.sensor.noise_sigma = 0.0;
    s.world.obstacles.clear();
    let mut rng = SimRng::new(seed);
    let start = s.start.position();
    let goal = s.world.goal;
    let keep_out = s.params.radius + 0.3;
    while s.world.obstacles.len() < 6 {
        let center = Point::new(rng.uniform_in(1.0, 7.0), rng.uniform_in(-2.0, 2.5));
        let radius = rng.uniform_in(0.15, 0.5);
        let obstacle = Obstacle::Circle { center, radius };
        if obstacle.distance(start) > keep_out && obstacle.distance(goal) > keep_out {
            s.world.obstacles.push(obstacle);
        }
    }
    s.id = Some(format!("field_{seed}"));
    s
}

fn safety() -> Check {
    let mut reached = 0;
    let mut lowest = f64::INFINITY;
    for seed in 0..20 {
        let s = obstacle_scenario(seed);
        let issues = navbench::scenario::check_scenario(&s);
        ensure(issues.is_empty(), || {
            format!("field {seed} invalid: {issues:?}")
        })?;
        let r = run_scenario(&s, "field", ControllerId::Dwa, seed, TimeTerm::EarlyBonus)
            .map_err(|e| e.to_string())?;
        ensure(r.log.outcome != Outcome::Collided, || {
            format!("field {seed}: collision")
        })?;
        ensure(r.report.min_avg_obstacle_distance > 0.0, || {
            format!("field {seed}: min_avg is 0")
        })?;
        reached += usize::from(r.log.outcome == Outcome::Reached);
        lowest = lowest.min(r.report.min_avg_obstacle_distance);
    }
    Ok(format!(
        "20 fields, 0 collisions, {reached} reached, lowest min_avg {lowest:.3}"
    ))
}

// ---------------------------------------------------------------------------
// 6. Metric closed forms

fn metric_closed_forms() -> Check {
    // Unit cross-track error held for ten one-second samples.
    let samples = (0..10)
        .map(|k| Sample {
            t: k as f64,
            state: RobotState::new(k as f64, 1.0, 0.0),
            control: Control::new(1.0, 0.0),
            clearance: 1.0,
            ranges: vec![1.0],
        })
        .collect();
    let log = TrajectoryLog {
        sample_period: 1.0,
        samples,
        outcome: Outcome::Timeout,
        planner_decisions: 10,
        passages_crossed: Vec::new(),
        reference_path: Some(vec![Point::new(-10.0, 0.0), Point::new(20.0, 0.0)]),
    };
    let (ise, iae, itae) = error_integrals(&log).map_err(|e| e.to_string())?;
    ensure(
        (ise - 10.0).abs() < 1e-12 && (iae - 10.0).abs() < 1e-12 && (itae - 45.0).abs() < 1e-12,
        || format!("ISE {ise} IAE {iae} ITAE {itae}"),
    )?;

    let mut end = log.clone();
    end.samples.truncate(1);
    end.samples[0].state = RobotState::new(3.0, 4.0, 0.0);
    let fe = final_error(&end, Point::new(0.0, 0.0)).map_err(|e| e.to_string())?;
    ensure((fe - 5.0).abs() < 1e-12, || format!("final error {fe}"))?;

    for mode in [TimeTerm::EarlyBonus, TimeTerm::LateBonus] {
        let cfg = EvalConfig {
            ref_time: 20.0,
            mode,
        };
        let score = evaluation_score(0.0, 0.0, 20.0, &cfg);
        ensure((score - 0.1).abs() < 1e-12, || {
            format!("{mode:?} evaluation {score}")
        })?;
    }
    Ok("ISE 10, IAE 10, ITAE 45, final error 5, evaluation 0.1 in both modes".into())
}

// ---------------------------------------------------------------------------
// 7. Fixed-point conformance

fn fixed_point() -> Check {
    let began = Instant::now();
    let report = run_fxcheck(10_000, 0);
    // Saturation boundary cases, checked independently of the harness.
    let big = Fx::from_real(300.0);
    ensure(big * big == Fx::MAX && -big * big == Fx::MIN, || {
        "product saturation".into()
    })?;
    ensure(
        Fx::MAX + Fx::ONE == Fx::MAX && Fx::MIN - Fx::ONE == Fx::MIN,
        || "sum saturation".into(),
    )?;
    let g = FxPidGains::from_real(&PidGains::new(100.0, 100.0, 100.0));
    let dt = FxStep::new(0.01).map_err(|e| e.to_string())?;
    let mut st = FxPidState::default();
    for k in 0..200 {
        let e = Fx::from_real(if k % 2 == 0 { 30_000.0 } else { -30_000.0 });
        let (u, next) = fx_pid_step(&g, st, e, &dt);
        ensure(u >= Fx::MIN && u <= Fx::MAX && u.is_saturated(), || {
            format!("step {k}: {u:?} not pinned")
        })?;
        st = next;
    }
    within(began.elapsed(), 5.0, "fxcheck")?;
    ensure(report.passed(), || report.to_string())?;
    let summary = report
        .to_string()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    Ok(format!("{summary}; {:.2}s", began.elapsed().as_secs_f64()))
}

// ---------------------------------------------------------------------------
// 8. Reproducibility and replay

fn reproducibility() -> Check {
    let s = sample("clutter");
    for c in ControllerId::ALL {
        let a = run_scenario(&s, "clutter", c, 11, TimeTerm::EarlyBonus).map_err(|e| e.to_string())?;
        let b = run_scenario(&s, "clutter", c, 11, TimeTerm::EarlyBonus).map_err(|e| e.to_string())?;
        let (ja, jb) = (to_jsonl(&a).unwrap(), to_jsonl(&b).unwrap());
        ensure(ja == jb, || format!("{c}: JSONL differs between runs"))?;
        ensure(to_csv([&a]).unwrap() == to_csv([&b]).unwrap(), || {
            format!("{c}: CSV differs")
        })?;
        let replay = read_jsonl(&ja).map_err(|e| e.to_string())?;
        ensure(replay.report == a.report, || {
            format!("{c}: recomputed report differs")
        })?;
        ensure(to_jsonl(&replay).unwrap() == ja, || {
            format!("{c}: replayed JSONL differs")
        })?;
    }
    Ok(
        "clutter seed 11, all controllers: byte-identical JSONL/CSV, replayed report identical"
            .into(),
    )
}

// ---------------------------------------------------------------------------
// 9. Success rate

fn success() -> Check {
    let limit = 60.0;
    let mut attempts = vec![
        Attempt {
            outcome: Outcome::Reached,
            elapsed: 30.0,
        };
        7
    ];
    attempts.push(Attempt {
        outcome: Outcome::Reached,
        elapsed: 61.0,
    });
    attempts.extend(
        [Attempt {
            outcome: Outcome::Collided,
            elapsed: 10.0,
        }; 2],
    );
    let rate = success_rate(&attempts, limit).map_err(|e| e.to_string())?;
    ensure(rate == 70.0, || format!("rate {rate}"))?;
    Ok(format!("7 on time, 1 late, 2 collided -> {rate:.1}%"))
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("dwa matches brute force", dwa_oracle),
        ("pid matches discrete sum", pid_oracle),
        ("triangulated wall distance", triangulation),
        ("straight line in empty world", straight_line),
        ("no collisions in obstacle fields", safety),
        ("metric closed forms", metric_closed_forms),
        ("fixed-point conformance", fixed_point),
        ("byte-identical reruns and replay", reproducibility),
        ("success rate", success),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[{}] PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("[{}] FAIL {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
