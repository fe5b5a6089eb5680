use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use navbench::batch::{load_scenarios, parse_controllers, parse_seeds, summary_csv};
use navbench::fxcheck::run_fxcheck;
use navbench::record::{artifact_stem, read_jsonl, to_csv, to_jsonl};
use navbench::{
    batch_with, plot, run_scenario_with, validate_scenario, ControllerId, Error, Result, Scenario,
};
use navbench_core::exec::Exec;
use navbench_core::metrics::TimeTerm;

#[derive(Parser)]
#[command(
    name = "navbench",
    version,
    about = "Deterministic 2D navigation benchmark runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario with one controller and seed.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// pid, dwa or wall
        #[arg(long)]
        controller: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Score time as (time - ref) / 100 instead of (ref - time) / 100.
        #[arg(long)]
        late_bonus: bool,
        /// Disable parallel candidate evaluation.
        #[arg(long)]
        sequential: bool,
    },
    /// Run every scenario in a directory against controllers and seeds.
    Batch {
        #[arg(long)]
        scenarios: PathBuf,
        /// Comma separated, e.g. `pid,dwa`.
        #[arg(long)]
        controllers: String,
        /// `A..B` (B excluded), `A..=B` or a single seed.
        #[arg(long)]
        seeds: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        late_bonus: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Render a JSONL run log as SVG.
    Plot {
        #[arg(long)]
        record: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute the CSV report of a JSONL run log.
    Metrics {
        #[arg(long)]
        record: PathBuf,
    },
    /// Check a scenario file and list every violation.
    Validate { file: PathBuf },
    /// Compare the fixed-point kernels with the float reference.
    Fxcheck {
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn mode(late_bonus: bool) -> TimeTerm {
    if late_bonus {
        TimeTerm::LateBonus
    } else {
        TimeTerm::EarlyBonus
    }
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn read_record(path: &Path) -> Result<navbench::RunRecord> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    read_jsonl(&text)
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run {
            scenario,
            controller,
            seed,
            out,
            late_bonus,
            sequential,
        } => {
            let controller: ControllerId = controller.parse()?;
            let sc = Scenario::load(&scenario)?;
            let name = sc.id_or(&scenario);
            let record = run_scenario_with(
                exec(sequential),
                &sc,
                &name,
                controller,
                seed,
                mode(late_bonus),
            )?;
            fs::create_dir_all(&out)?;
            let stem = artifact_stem(&record);
            fs::write(out.join(format!("{stem}.jsonl")), to_jsonl(&record)?)?;
            fs::write(out.join(format!("{stem}.csv")), to_csv([&record])?)?;
            let r = &record.report;
            println!(
                "{stem}: {:?} after {} periods, path {:.3} m, final error {:.3} m",
                record.log.outcome, r.control_periods, r.path_length, r.final_error
            );
        }
        Command::Batch {
            scenarios,
            controllers,
            seeds,
            out,
            late_bonus,
            sequential,
        } => {
            let controllers = parse_controllers(&controllers)?;
            let seeds = parse_seeds(&seeds)?;
            let scenarios = load_scenarios(&scenarios)?;
            let report = batch_with(
                exec(sequential),
                &scenarios,
                &controllers,
                &seeds,
                mode(late_bonus),
            )?;
            let logs = out.join("logs");
            fs::create_dir_all(&logs)?;
            for r in &report.records {
                fs::write(
                    logs.join(format!("{}.jsonl", artifact_stem(r))),
                    to_jsonl(r)?,
                )?;
            }
            fs::write(out.join("report.csv"), to_csv(&report.records)?)?;
            let summary = summary_csv(&report.summary)?;
            fs::write(out.join("summary.csv"), &summary)?;
            print!("{summary}");
        }
        Command::Plot { record, out } => {
            plot(&read_record(&record)?, &out)?;
        }
        Command::Metrics { record } => {
            print!("{}", to_csv([&read_record(&record)?])?);
        }
        Command::Validate { file } => {
            let violations = validate_scenario(&file)?;
            if !violations.is_empty() {
                for v in &violations {
                    println!("{v}");
                }
                return Ok(ExitCode::from(2));
            }
            println!("ok");
        }
        Command::Fxcheck { cases, seed } => {
            let report = run_fxcheck(cases, seed);
            println!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
