//! Conformance of the Q16.16 kernels against the floating-point reference.

use std::fmt;

use navbench_core::controllers::{pid_step, PidGains, PidState};
use navbench_core::fxp::{fx_objective, fx_pid_step, Fx, FxPidGains, FxPidState, FxStep};
use navbench_core::rng::SimRng;

pub const PID_TOLERANCE: f64 = 1.0 / 256.0;
pub const OBJECTIVE_TOLERANCE: f64 = 1.0 / 8192.0;
const STEPS_PER_CASE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct FxCheckReport {
    pub cases: usize,
    pub pid_max_deviation: f64,
    pub objective_max_deviation: f64,
    /// Saturation probes that did not land on the exact 32-bit bound.
    pub saturation_failures: Vec<String>,
}

impl FxCheckReport {
    pub fn pid_ok(&self) -> bool {
        self.pid_max_deviation <= PID_TOLERANCE
    }

    pub fn objective_ok(&self) -> bool {
        self.objective_max_deviation <= OBJECTIVE_TOLERANCE
    }

    pub fn passed(&self) -> bool {
        self.pid_ok() && self.objective_ok() && self.saturation_failures.is_empty()
    }
}

impl fmt::Display for FxCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(
            f,
            "pid        {} cases  max |fx - float| = {:.3e}  (limit {:.3e})  {}",
            self.cases,
            self.pid_max_deviation,
            PID_TOLERANCE,
            verdict(self.pid_ok())
        )?;
        writeln!(
            f,
            "objective  {} cases  max |fx - float| = {:.3e}  (limit {:.3e})  {}",
            self.cases,
            self.objective_max_deviation,
            OBJECTIVE_TOLERANCE,
            verdict(self.objective_ok())
        )?;
        write!(
            f,
            "saturation {}",
            verdict(self.saturation_failures.is_empty())
        )?;
        for s in &self.saturation_failures {
            write!(f, "\n  {s}")?;
        }
        Ok(())
    }
}

fn grid(rng: &mut SimRng, lo: f64, hi: f64) -> f64 {
    Fx::from_real(rng.uniform_in(lo, hi)).to_real()
}

/// One PID case: quantized gains, clamp and period, then a short sequence of
/// heading-sized errors. Returns the worst output deviation.
fn pid_case(rng: &mut SimRng) -> f64 {
    let gains = PidGains::new(
        grid(rng, 0.0, 10.0),
        grid(rng, 0.0, 5.0),
        grid(rng, 0.0, 2.0),
    )
    .with_i_clamp(grid(rng, 0.1, 5.0));
    let step =
        FxStep::new([0.05, 0.1, 0.2][(rng.next_u64() % 3) as usize]).expect("positive period");
    let dt = step.dt.to_real();
    let fx_gains = FxPidGains::from_real(&gains);
    let (mut st, mut fst) = (PidState::default(), FxPidState::default());
    let mut worst: f64 = 0.0;
    for _ in 0..STEPS_PER_CASE {
        let e = grid(rng, -std::f64::consts::PI, std::f64::consts::PI);
        let (u, next) = pid_step(&gains, st, e, dt).expect("finite inputs");
        let (fu, fnext) = fx_pid_step(&fx_gains, fst, Fx::from_real(e), &step);
        worst = worst.max((fu.to_real() - u).abs());
        st = next;
        fst = fnext;
    }
    worst
}

/// Unquantized terms and weights in `[0, 1]`.
fn objective_case(rng: &mut SimRng) -> f64 {
    let t = [rng.uniform(), rng.uniform(), rng.uniform()];
    let w = [rng.uniform(), rng.uniform(), rng.uniform()];
    let float = w[0] * t[0] + w[1] * t[1] + w[2] * t[2];
    let fx = fx_objective(t.map(Fx::from_real), w.map(Fx::from_real));
    (fx.to_real() - float).abs()
}

fn saturation_probes() -> Vec<String> {
    let big = Fx::from_real(300.0);
    let probes = [
        ("300 * 300", big * big, Fx::MAX),
        ("-300 * 300", -big * big, Fx::MIN),
        ("MAX + 1", Fx::MAX + Fx::ONE, Fx::MAX),
        ("MIN - 1", Fx::MIN - Fx::ONE, Fx::MIN),
        ("-MIN", -Fx::MIN, Fx::MAX),
        ("from_real(1e12)", Fx::from_real(1e12), Fx::MAX),
        ("from_real(-1e12)", Fx::from_real(-1e12), Fx::MIN),
    ];
    probes
        .into_iter()
        .filter(|(_, got, want)| got != want)
        .map(|(name, got, want)| format!("{name}: got {} want {}", got.raw(), want.raw()))
        .collect()
}

pub fn run_fxcheck(cases: usize, seed: u64) -> FxCheckReport {
    let mut rng = SimRng::new(seed);
    let mut pid_max: f64 = 0.0;
    let mut obj_max: f64 = 0.0;
    for _ in 0..cases {
        pid_max = pid_max.max(pid_case(&mut rng));
        obj_max = obj_max.max(objective_case(&mut rng));
    }
    FxCheckReport {
        cases,
        pid_max_deviation: pid_max,
        objective_max_deviation: obj_max,
        saturation_failures: saturation_probes(),
    }
}
