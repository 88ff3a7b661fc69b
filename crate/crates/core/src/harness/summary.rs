use serde::{Deserialize, Serialize};

use crate::mechanics::{Pose2, Vec2};
use crate::world::{empirical_tracking_point, EpisodeStatus, TrajectoryLog};

/// Steps turning slower than this (rad/s) do not count towards the
/// empirical tracking point.
pub const OMEGA_MIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub name: String,
    pub converged: bool,
    pub end_time: f64,
}

/// Headline numbers of one run. Metrics are absent when the run failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryMetrics {
    pub scenario: String,
    pub seed: u64,
    pub status: EpisodeStatus,
    pub error: Option<String>,
    pub final_pose: Pose2,
    /// Final position error against the last goal (m).
    pub final_pos_error: Option<f64>,
    /// Final heading error against the last goal (rad).
    pub final_ang_error: Option<f64>,
    /// Simulated time until the last goal tolerance held (s).
    pub time_to_converge: Option<f64>,
    /// RMS distance of the tracking point from its reference path (m).
    pub rms_path_error: Option<f64>,
    /// Signed distance of the empirical zero-slip point from the CoP over the
    /// last stage (m), and its standard deviation.
    pub tracking_point_mean: Option<f64>,
    pub tracking_point_std: Option<f64>,
    /// Smallest friction-cone slack over the run (N).
    pub min_cone_slack: Option<f64>,
    /// Mean realized-minus-desired net force for wrench-space controllers (N).
    pub force_residual: Option<[f64; 2]>,
    pub stages: Vec<StageSummary>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn summarize(log: &TrajectoryLog) -> SummaryMetrics {
    let stages = log
        .stages
        .iter()
        .map(|s| StageSummary { name: s.name.clone(), converged: s.converged, end_time: s.end_time })
        .collect();
    let mut summary = SummaryMetrics {
        scenario: log.scenario.clone(),
        seed: log.seed,
        status: log.status,
        error: log.error.clone(),
        final_pose: log.final_pose,
        final_pos_error: None,
        final_ang_error: None,
        time_to_converge: None,
        rms_path_error: None,
        tracking_point_mean: None,
        tracking_point_std: None,
        min_cone_slack: None,
        force_residual: None,
        stages,
    };
    if log.status == EpisodeStatus::Error {
        return summary;
    }
    if let Some(goal) = log.stages.last().map(|s| s.goal) {
        let (pos, ang) = log.final_pose.error_to(&goal);
        summary.final_pos_error = Some(pos);
        summary.final_ang_error = Some(ang);
    }
    if log.status == EpisodeStatus::Converged {
        summary.time_to_converge = Some(log.final_time);
    }
    summary.rms_path_error = mean(log.records.iter().filter_map(|r| r.path_error).map(|e| e * e)).map(f64::sqrt);
    let last_stage = log.stages.len().saturating_sub(1);
    let last: Vec<_> = log.records.iter().filter(|r| r.stage == last_stage).cloned().collect();
    let axis = log.stages.last().map_or(0.0, |s| s.frame);
    if let Ok(point) = empirical_tracking_point(&last, axis, OMEGA_MIN) {
        summary.tracking_point_mean = Some(point.offset.mean);
        summary.tracking_point_std = Some(point.offset.std);
    }
    summary.min_cone_slack = log.records.iter().map(|r| r.slack_min).reduce(f64::min);
    let residuals: Vec<Vec2> = log
        .records
        .iter()
        .filter_map(|r| r.desired_wrench.map(|w| r.wrench.transport(r.cop, Vec2::zeros()).force() - w.force()))
        .collect();
    if !residuals.is_empty() {
        let n = residuals.len() as f64;
        let sum: Vec2 = residuals.iter().sum();
        summary.force_residual = Some([sum.x / n, sum.y / n]);
    }
    summary
}
