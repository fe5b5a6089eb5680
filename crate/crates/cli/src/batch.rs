//! Cross-product runs over scenarios, controllers and seeds.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use navbench_core::exec::Exec;
use navbench_core::metrics::{success_rate, Attempt, TimeTerm};

use crate::runner::{run_scenario_with, ControllerId, RunRecord};
use crate::scenario::Scenario;
use crate::{Error, Result};

/// Success rate of one (scenario, controller) pair over its seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessRow {
    pub scenario: String,
    pub controller: ControllerId,
    pub runs: usize,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport {
    /// Ordered by (scenario, controller, seed).
    pub records: Vec<RunRecord>,
    pub summary: Vec<SuccessRow>,
}

/// Loads every `*.json` file in `dir`, sorted by scenario id.
pub fn load_scenarios(dir: &Path) -> Result<Vec<(String, Scenario)>> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    let mut problems = Vec::new();
    for p in &paths {
        match Scenario::load(p) {
            Ok(s) => out.push((s.id_or(p), s)),
            Err(Error::Validation(v)) => {
                problems.extend(v.into_iter().map(|m| format!("{}: {m}", p.display())))
            }
            Err(e) => return Err(e),
        }
    }
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::Validation(vec![format!(
            "duplicate scenario id `{}`",
            w[0].0
        )]));
    }
    Ok(out)
}

/// Parses `A..B` (half-open), `A..=B` or a single seed.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("seed range `{spec}`: expected N, A..B or A..=B"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let seeds: Vec<u64> = if let Some((a, b)) = spec.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = spec.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        vec![num(spec)?]
    };
    if seeds.is_empty() {
        return Err(Error::NoRuns("seed range is empty"));
    }
    Ok(seeds)
}

pub fn parse_controllers(list: &str) -> Result<Vec<ControllerId>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn batch(
    scenarios: &[(String, Scenario)],
    controllers: &[ControllerId],
    seeds: &[u64],
    mode: TimeTerm,
) -> Result<BatchReport> {
    batch_with(Exec::default(), scenarios, controllers, seeds, mode)
}

/// One run per (scenario, controller, seed). Runs may execute in parallel;
/// the output order is fixed regardless.
pub fn batch_with(
    exec: Exec,
    scenarios: &[(String, Scenario)],
    controllers: &[ControllerId],
    seeds: &[u64],
    mode: TimeTerm,
) -> Result<BatchReport> {
    if scenarios.is_empty() {
        return Err(Error::NoRuns("no scenarios"));
    }
    if controllers.is_empty() {
        return Err(Error::NoRuns("no controllers"));
    }
    if seeds.is_empty() {
        return Err(Error::NoRuns("no seeds"));
    }
    let mut scenarios: Vec<&(String, Scenario)> = scenarios.iter().collect();
    scenarios.sort_by(|a, b| a.0.cmp(&b.0));
    let mut controllers = controllers.to_vec();
    controllers.sort_by_key(|c| c.as_str());
    controllers.dedup();
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();

    let mut jobs = Vec::with_capacity(scenarios.len() * controllers.len() * seeds.len());
    for s in &scenarios {
        for &c in &controllers {
            for &seed in &seeds {
                jobs.push((*s, c, seed));
            }
        }
    }
    // Inner planners run sequentially; the batch is the parallel axis.
    let records = exec
        .map(&jobs, |((name, scenario), c, seed)| {
            run_scenario_with(Exec::Sequential, scenario, name, *c, *seed, mode)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut groups: BTreeMap<(&str, &str), (ControllerId, f64, Vec<Attempt>)> = BTreeMap::new();
    for r in &records {
        let entry = groups
            .entry((r.scenario.as_str(), r.controller.as_str()))
            .or_insert_with(|| (r.controller, r.report_config.time_limit, Vec::new()));
        entry.2.push(Attempt {
            outcome: r.log.outcome,
            elapsed: r.log.samples.last().map_or(0.0, |s| s.t),
        });
    }
    let summary = groups
        .into_iter()
        .map(|((scenario, _), (controller, limit, attempts))| {
            Ok(SuccessRow {
                scenario: scenario.to_string(),
                controller,
                runs: attempts.len(),
                success_rate: success_rate(&attempts, limit)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BatchReport { records, summary })
}

pub fn summary_csv(rows: &[SuccessRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scenario", "controller", "runs", "success_rate"])?;
    for r in rows {
        w.write_record([
            r.scenario.clone(),
            r.controller.to_string(),
            r.runs.to_string(),
            format!("{:.1}", r.success_rate),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}
