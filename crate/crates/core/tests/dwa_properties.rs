use navbench_core::dwa::{self, DwaConfig, DwaWeights};
use navbench_core::exec::Exec;
use navbench_core::rng::SimRng;
use navbench_core::world::{Bounds, Obstacle, World};
use navbench_core::{Control, Point, RobotParams, RobotState};
use proptest::prelude::*;

fn params() -> RobotParams {
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

fn cfg() -> DwaConfig {
    DwaConfig {
        n_v: 7,
        n_w: 9,
        horizon: 1.5,
        ..DwaConfig::default()
    }
}

/// Obstacles scattered around the origin, none touching the robot body.
fn random_world(seed: u64) -> World {
    let mut rng = SimRng::new(seed);
    let goal = Point::new(rng.uniform_in(2.0, 6.0), rng.uniform_in(-3.0, 3.0));
    let mut world = World::empty(
        Bounds {
            min: Point::new(-8.0, -8.0),
            max: Point::new(8.0, 8.0),
        },
        goal,
        0.2,
    );
    for _ in 0..8 {
        let center = Point::new(rng.uniform_in(-4.0, 7.0), rng.uniform_in(-4.0, 4.0));
        let radius = rng.uniform_in(0.1, 0.6);
        if center.distance(Point::new(0.0, 0.0)) > radius + 0.25 {
            world.obstacles.push(Obstacle::Circle { center, radius });
        }
    }
    world
}

fn start(seed: u64) -> (RobotState, Control) {
    let mut rng = SimRng::new(seed ^ 0x5eed);
    (
        RobotState::new(0.0, 0.0, rng.uniform_in(-3.0, 3.0)),
        Control::new(rng.uniform_in(0.0, 1.0), rng.uniform_in(-1.5, 1.5)),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn candidates_lie_in_both_boxes(seed in any::<u64>()) {
        let world = random_world(seed);
        let (state, current) = start(seed);
        let p = params();
        let c = cfg();
        let cands = dwa::search_space(&state, current, world.goal, &p, &c, &DwaWeights::default(), &world).unwrap();
        prop_assert_eq!(cands.len(), c.n_v * c.n_w);
        let vs = dwa::possible_space(&p, false);
        let vd = dwa::dynamic_window(current, &p, c.period_t).unwrap();
        for cand in &cands {
            prop_assert!(vs.contains(cand.v, cand.w) && vd.contains(cand.v, cand.w));
            if cand.admissible {
                let room = (cand.clearance - cand.v.abs() * c.period_t).max(0.0);
                prop_assert!(cand.v.abs() <= (2.0 * room * p.brake_v).sqrt());
                prop_assert!(cand.w.abs() <= (2.0 * room * p.brake_omega).sqrt());
            }
        }
    }

    #[test]
    fn selection_is_scale_invariant(seed in any::<u64>(), k in 0.01..100.0f64) {
        let world = random_world(seed);
        let (state, current) = start(seed);
        let w = DwaWeights { alpha: 0.7, beta_w: 0.2, gamma: 0.3 };
        let a = dwa::plan(&state, current, world.goal, &world, &params(), &cfg(), &w);
        let b = dwa::plan(&state, current, world.goal, &world, &params(), &cfg(), &w.scaled(k));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn speed_only_weighting_is_monotone(seed in any::<u64>(), g1 in 0.01..10.0f64, extra in 0.0..10.0f64) {
        let world = random_world(seed);
        let (state, current) = start(seed);
        let low = DwaWeights { alpha: 0.0, beta_w: 0.0, gamma: g1 };
        let high = DwaWeights { alpha: 0.0, beta_w: 0.0, gamma: g1 + extra };
        let a = dwa::plan(&state, current, world.goal, &world, &params(), &cfg(), &low);
        let b = dwa::plan(&state, current, world.goal, &world, &params(), &cfg(), &high);
        prop_assert!(b.v >= a.v);
    }

    #[test]
    fn parallel_and_sequential_agree(seed in any::<u64>()) {
        let world = random_world(seed);
        let (state, current) = start(seed);
        let w = DwaWeights::default();
        let seq = dwa::search_space_with(Exec::Sequential, &state, current, world.goal, &params(), &cfg(), &w, &world).unwrap();
        let par = dwa::search_space_with(Exec::Parallel, &state, current, world.goal, &params(), &cfg(), &w, &world).unwrap();
        prop_assert_eq!(seq, par);
    }
}

#[test]
fn open_space_goal_ahead_takes_fastest_straight() {
    let goal = Point::new(5.0, 0.0);
    let world = World::empty(
        Bounds {
            min: Point::new(-10.0, -10.0),
            max: Point::new(10.0, 10.0),
        },
        goal,
        0.1,
    );
    let c = dwa::plan(
        &RobotState::default(),
        Control::new(0.5, 0.0),
        goal,
        &world,
        &params(),
        &cfg(),
        &DwaWeights::default(),
    );
    let window = dwa::dynamic_window(Control::new(0.5, 0.0), &params(), 0.1).unwrap();
    assert_eq!(c, Control::new(window.v_max, 0.0));
}

#[test]
fn blocked_ahead_limits_straight_speed() {
    let goal = Point::new(5.0, 0.0);
    let mut world = World::empty(
        Bounds {
            min: Point::new(-10.0, -10.0),
            max: Point::new(10.0, 10.0),
        },
        goal,
        0.1,
    );
    world.obstacles.push(Obstacle::Segment {
        a: Point::new(0.23, -0.5),
        b: Point::new(0.23, 0.5),
    });
    let p = params();
    let cfg = cfg();
    let cands = dwa::search_space(
        &RobotState::default(),
        Control::new(0.5, 0.0),
        goal,
        &p,
        &cfg,
        &DwaWeights::default(),
        &world,
    )
    .unwrap();
    // Straight ahead the gap is 0.03: one period plus braking must fit in it.
    for x in cands.iter().filter(|x| x.w == 0.0 && x.admissible) {
        assert!(
            x.v * cfg.period_t + x.v * x.v / (2.0 * p.brake_v) <= 0.03 + 1e-12,
            "{x:?}"
        );
    }
    assert!(cands
        .iter()
        .any(|x| x.w == 0.0 && x.v > 0.0 && !x.admissible));
}

#[test]
fn symmetric_corridor_goes_straight() {
    let goal = Point::new(6.0, 0.0);
    let mut world = World::empty(
        Bounds {
            min: Point::new(-1.0, -3.0),
            max: Point::new(8.0, 3.0),
        },
        goal,
        0.1,
    );
    for y in [-0.8, 0.8] {
        world.obstacles.push(Obstacle::Segment {
            a: Point::new(-1.0, y),
            b: Point::new(8.0, y),
        });
    }
    let c = dwa::plan(
        &RobotState::default(),
        Control::new(0.3, 0.0),
        goal,
        &world,
        &params(),
        &cfg(),
        &DwaWeights::default(),
    );
    assert_eq!(c.omega, 0.0);
    assert!(c.v > 0.0);
}
