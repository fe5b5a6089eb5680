mod common;

use common::{assert_golden, sample};
use navbench::record::{to_csv, CSV_COLUMNS};
use navbench::{render_svg, run_scenario, ControllerId, Error};
use navbench_core::metrics::TimeTerm;

const CSV_HEADER: &str = "scenario,controller,seed,success,time_to_goal,path_length,control_periods,ise,iae,itae,final_error,mean_error,evaluation,avg_obstacle_distance,min_avg_obstacle_distance,energy,passages";

#[test]
fn csv_header_is_fixed() {
    assert_eq!(CSV_COLUMNS.join(","), CSV_HEADER);
    let r = run_scenario(
        &sample("open_field"),
        "open_field",
        ControllerId::Pid,
        0,
        TimeTerm::EarlyBonus,
    )
    .unwrap();
    let csv = to_csv([&r]).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), CSV_COLUMNS.len());
    assert_eq!(&row[..4], ["open_field", "pid", "0", "true"]);
}

#[test]
fn failed_run_leaves_time_to_goal_empty() {
    let r = run_scenario(
        &sample("corridor"),
        "corridor",
        ControllerId::Pid,
        0,
        TimeTerm::EarlyBonus,
    )
    .unwrap();
    assert!(!r.report.success);
    let csv = to_csv([&r]).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "false");
    assert_eq!(row[4], "");
}

#[test]
fn svg_matches_golden() {
    let r = run_scenario(
        &sample("corridor"),
        "corridor",
        ControllerId::Wall,
        0,
        TimeTerm::EarlyBonus,
    )
    .unwrap();
    let svg = render_svg(&r).unwrap();
    assert_eq!(svg, render_svg(&r).unwrap());
    for id in [
        "bounds",
        "obstacles",
        "gates",
        "goal",
        "reference",
        "trajectory",
        "start",
        "end",
    ] {
        assert!(svg.contains(&format!("id=\"{id}\"")), "missing {id}");
    }
    assert_golden("corridor_wall_0.svg", &svg);
}

#[test]
fn no_reference_layer_without_reference_path() {
    let mut s = sample("open_field");
    s.reference_path = Some(Vec::new());
    let r = run_scenario(&s, "open_field", ControllerId::Pid, 0, TimeTerm::EarlyBonus).unwrap();
    assert_eq!(r.log.reference_path, None);
    let svg = render_svg(&r).unwrap();
    assert!(!svg.contains("id=\"reference\""));
    assert!(svg.contains("id=\"trajectory\""));
}

#[test]
fn empty_log_cannot_be_plotted() {
    let mut r = run_scenario(
        &sample("open_field"),
        "open_field",
        ControllerId::Pid,
        0,
        TimeTerm::EarlyBonus,
    )
    .unwrap();
    r.log.samples.clear();
    assert!(matches!(render_svg(&r), Err(Error::EmptyLog)));
}
