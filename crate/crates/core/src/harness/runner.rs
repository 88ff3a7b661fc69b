use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::plot::{render_plot, PlotStyle};
use super::scenario::{load_scenario, Scenario};
use super::summary::{summarize, SummaryMetrics};
use crate::error::{Error, Result};
use crate::world::{run_episode, EpisodeStatus, TrajectoryLog};

/// Environment variable overriding the scenario seed.
pub const SEED_ENV: &str = "MACRO_SEED";

/// Seed override with precedence CLI flag > environment > file (`None`).
pub fn resolve_seed(cli: Option<u64>, env: Option<&str>) -> Result<Option<u64>> {
    if cli.is_some() {
        return Ok(cli);
    }
    match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("{SEED_ENV} must be an unsigned integer (got '{s}')"))),
        None => Ok(None),
    }
}

/// Process exit code for a finished run.
pub fn exit_code(status: EpisodeStatus) -> i32 {
    match status {
        EpisodeStatus::Converged => 0,
        EpisodeStatus::Timeout => 2,
        EpisodeStatus::Error => 1,
    }
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub log: TrajectoryLog,
    pub summary: SummaryMetrics,
}

impl RunArtifacts {
    pub fn status(&self) -> EpisodeStatus {
        self.log.status
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunArtifacts> {
    let log = run_episode(scenario.episode()?, &scenario.sim_config());
    let summary = summarize(&log);
    Ok(RunArtifacts { log, summary })
}

/// Writes `log.csv`, `log.json`, `summary.json` and `trajectory.svg`.
pub fn write_artifacts(out_dir: &Path, artifacts: &RunArtifacts) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("log.csv"), artifacts.log.to_csv())?;
    fs::write(out_dir.join("log.json"), artifacts.log.to_json())?;
    let summary = serde_json::to_string_pretty(&artifacts.summary).expect("summary serializes");
    fs::write(out_dir.join("summary.json"), summary + "\n")?;
    fs::write(out_dir.join("trajectory.svg"), render_plot(&artifacts.log, &PlotStyle::default()))?;
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn with_seed(overrides: &[String], seed: Option<u64>) -> Vec<String> {
    let mut all = overrides.to_vec();
    if let Some(s) = seed {
        all.push(format!("seed={s}"));
    }
    all
}

/// Loads, runs and writes one scenario.
pub fn run(scenario_path: &Path, out_dir: &Path, overrides: &[String], seed: Option<u64>) -> Result<RunArtifacts> {
    let scenario = load_scenario(&read(scenario_path)?, &with_seed(overrides, seed))?;
    let artifacts = run_scenario(&scenario)?;
    write_artifacts(out_dir, &artifacts)?;
    Ok(artifacts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: String,
    pub status: Option<EpisodeStatus>,
    pub error: Option<String>,
    pub summary: Option<SummaryMetrics>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const SWEEP_HEADER: &str = "value,status,final_pos_error,final_ang_error,time_to_converge,rms_path_error,\
tracking_point_mean,tracking_point_std,min_cone_slack,residual_fx,residual_fy,error";

/// Aggregated sweep table, one row per value in input order.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let status = match r.status {
            Some(EpisodeStatus::Converged) => "converged",
            Some(EpisodeStatus::Timeout) => "timeout",
            Some(EpisodeStatus::Error) | None => "error",
        };
        let s = r.summary.as_ref();
        let get = |f: fn(&SummaryMetrics) -> Option<f64>| opt(s.and_then(f));
        let residual = s.and_then(|s| s.force_residual);
        let fields = [
            csv_field(&r.value),
            status.to_string(),
            get(|s| s.final_pos_error),
            get(|s| s.final_ang_error),
            get(|s| s.time_to_converge),
            get(|s| s.rms_path_error),
            get(|s| s.tracking_point_mean),
            get(|s| s.tracking_point_std),
            get(|s| s.min_cone_slack),
            opt(residual.map(|r| r[0])),
            opt(residual.map(|r| r[1])),
            csv_field(r.error.as_deref().unwrap_or("")),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// One run per value of `param`, on at most `jobs` workers. Each run writes
/// into `out_dir/run_<index>`; failures become rows instead of aborting.
pub fn sweep(
    scenario_path: &Path,
    param: &str,
    values: &[String],
    out_dir: &Path,
    overrides: &[String],
    seed: Option<u64>,
    jobs: usize,
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one value".into()));
    }
    let text = read(scenario_path)?;
    let base = with_seed(overrides, seed);
    fs::create_dir_all(out_dir)?;
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Io(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        values
            .par_iter()
            .enumerate()
            .map(|(i, value)| {
                let mut all = base.clone();
                all.push(format!("{param}={value}"));
                let result = load_scenario(&text, &all).and_then(|s| {
                    let a = run_scenario(&s)?;
                    write_artifacts(&out_dir.join(format!("run_{i}")), &a)?;
                    Ok(a)
                });
                match result {
                    Ok(a) => SweepRow {
                        value: value.clone(),
                        status: Some(a.status()),
                        error: a.summary.error.clone(),
                        summary: Some(a.summary),
                    },
                    Err(e) => {
                        SweepRow { value: value.clone(), status: None, error: Some(e.to_string()), summary: None }
                    }
                }
            })
            .collect()
    });
    fs::write(out_dir.join("sweep.csv"), sweep_csv(&rows))?;
    Ok(rows)
}
