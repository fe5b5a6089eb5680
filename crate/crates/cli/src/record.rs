//! On-disk formats: one JSONL log per run and the CSV report table.
//!
//! A log file starts with a header object carrying everything needed to
//! re-score and redraw the run, followed by one object per sample. Floats are
//! written in shortest round-trip form, so reading a log back reproduces the
//! run bit for bit.

use std::io::Write;

use navbench_core::metrics::{
    compute_report, MetricsReport, Outcome, ReportConfig, Sample, TrajectoryLog,
};
use navbench_core::world::World;
use navbench_core::{Control, Point, RobotState};
use serde::{Deserialize, Serialize};

use crate::runner::{ControllerId, RunRecord};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Report columns, in file order.
pub const CSV_COLUMNS: [&str; 17] = [
    "scenario",
    "controller",
    "seed",
    "success",
    "time_to_goal",
    "path_length",
    "control_periods",
    "ise",
    "iae",
    "itae",
    "final_error",
    "mean_error",
    "evaluation",
    "avg_obstacle_distance",
    "min_avg_obstacle_distance",
    "energy",
    "passages",
];

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    schema: u32,
    scenario: String,
    controller: ControllerId,
    seed: u64,
    sample_period: f64,
    outcome: Outcome,
    planner_decisions: u64,
    passages_crossed: Vec<String>,
    reference_path: Option<Vec<Point>>,
    world: World,
    report: ReportConfig,
}

#[derive(Debug, Serialize, Deserialize)]
struct Line {
    t: f64,
    x: f64,
    y: f64,
    theta: f64,
    v: f64,
    omega: f64,
    clearance: f64,
    ranges: Vec<f64>,
}

pub fn write_jsonl<W: Write>(record: &RunRecord, mut out: W) -> Result<()> {
    let header = Header {
        schema: SCHEMA_VERSION,
        scenario: record.scenario.clone(),
        controller: record.controller,
        seed: record.seed,
        sample_period: record.log.sample_period,
        outcome: record.log.outcome,
        planner_decisions: record.log.planner_decisions,
        passages_crossed: record.log.passages_crossed.clone(),
        reference_path: record.log.reference_path.clone(),
        world: record.world.clone(),
        report: record.report_config,
    };
    let to_io = |e: serde_json::Error| Error::Io(e.into());
    serde_json::to_writer(&mut out, &header).map_err(to_io)?;
    out.write_all(b"\n")?;
    for s in &record.log.samples {
        let line = Line {
            t: s.t,
            x: s.state.x,
            y: s.state.y,
            theta: s.state.theta,
            v: s.control.v,
            omega: s.control.omega,
            clearance: s.clearance,
            ranges: s.ranges.clone(),
        };
        serde_json::to_writer(&mut out, &line).map_err(to_io)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn to_jsonl(record: &RunRecord) -> Result<String> {
    let mut buf = Vec::new();
    write_jsonl(record, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a JSONL log and recomputes its report from the samples.
pub fn read_jsonl(text: &str) -> Result<RunRecord> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse("empty log file".into()))?;
    let header: Header =
        serde_json::from_str(first).map_err(|e| Error::Parse(format!("header: {e}")))?;
    if header.schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported log schema {}",
            header.schema
        )));
    }
    let samples = lines
        .enumerate()
        .map(|(i, l)| {
            let line: Line = serde_json::from_str(l)
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 2)))?;
            Ok(Sample {
                t: line.t,
                state: RobotState {
                    x: line.x,
                    y: line.y,
                    theta: line.theta,
                },
                control: Control::new(line.v, line.omega),
                clearance: line.clearance,
                ranges: line.ranges,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if samples.is_empty() {
        return Err(Error::EmptyLog);
    }
    let log = TrajectoryLog {
        sample_period: header.sample_period,
        samples,
        outcome: header.outcome,
        planner_decisions: header.planner_decisions,
        passages_crossed: header.passages_crossed,
        reference_path: header.reference_path,
    };
    let report = compute_report(&log, &header.report)?;
    Ok(RunRecord {
        scenario: header.scenario,
        controller: header.controller,
        seed: header.seed,
        world: header.world,
        report_config: header.report,
        log,
        report,
    })
}

#[derive(Debug, Serialize)]
struct Row<'a> {
    scenario: &'a str,
    controller: &'a str,
    seed: u64,
    success: bool,
    time_to_goal: Option<f64>,
    path_length: f64,
    control_periods: u64,
    ise: f64,
    iae: f64,
    itae: f64,
    final_error: f64,
    mean_error: f64,
    evaluation: f64,
    avg_obstacle_distance: f64,
    min_avg_obstacle_distance: f64,
    energy: f64,
    passages: usize,
}

fn row(record: &RunRecord) -> Row<'_> {
    let r: &MetricsReport = &record.report;
    Row {
        scenario: &record.scenario,
        controller: record.controller.as_str(),
        seed: record.seed,
        success: r.success,
        time_to_goal: r.time_to_goal,
        path_length: r.path_length,
        control_periods: r.control_periods,
        ise: r.ise,
        iae: r.iae,
        itae: r.itae,
        final_error: r.final_error,
        mean_error: r.mean_error,
        evaluation: r.evaluation,
        avg_obstacle_distance: r.avg_obstacle_distance,
        min_avg_obstacle_distance: r.min_avg_obstacle_distance,
        energy: r.energy,
        passages: r.passages,
    }
}

/// Header line plus one row per record, in the order given.
pub fn write_csv<'a, W: Write>(
    records: impl IntoIterator<Item = &'a RunRecord>,
    out: W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.serialize(row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv<'a>(records: impl IntoIterator<Item = &'a RunRecord>) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

/// File stem used for a run's artifacts.
pub fn artifact_stem(record: &RunRecord) -> String {
    format!(
        "{}__{}__{}",
        record.scenario, record.controller, record.seed
    )
}
