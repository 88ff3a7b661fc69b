use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::object::ObjectParams;
use crate::error::{Error, Result};
use crate::mechanics::{Pose2, Twist, Vec2, Wrench};
use crate::modes::ModeKind;

pub const LOG_SCHEMA: &str = "macro-log/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpisodeStatus {
    Converged,
    Timeout,
    Error,
}

/// Realized force at one contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactRecord {
    /// In-plane force on the object (body frame, N).
    pub fx: f64,
    pub fy: f64,
    /// Realized normal force (N).
    #[serde(rename = "fn")]
    pub f_n: f64,
    /// Commanded normal force before regulation (N).
    pub fn_cmd: f64,
    /// Downward load added to the support (N).
    pub press: f64,
    pub slack: f64,
}

/// State at time `time` and the forces applied over the following step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub time: f64,
    pub stage: usize,
    pub pose: Pose2,
    pub contacts: Vec<ContactRecord>,
    /// Net wrench about the centre of pressure.
    pub wrench: Wrench,
    /// Body twist at the centre of pressure.
    pub twist: Twist,
    pub cop: Vec2,
    pub n_total: f64,
    pub slack_min: f64,
    pub err_pos: f64,
    pub err_ang: f64,
    /// World position of the controller's tracking point.
    pub tracking_point: Vec2,
    /// Controller's distance from its reference path, when it has one.
    pub path_error: Option<f64>,
    /// Wrench about the body origin the controller asked for, when it works
    /// in wrench space.
    pub desired_wrench: Option<Wrench>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageLog {
    pub name: String,
    pub mode: ModeKind,
    /// Angle of the mode's forward axis in the body frame.
    #[serde(default)]
    pub frame: f64,
    pub goal: Pose2,
    /// Contact positions (body frame).
    pub contacts: Vec<Vec2>,
    /// Tracking point (body frame).
    pub tracking_point: Vec2,
    /// Reference path of the tracking point (world frame), possibly empty.
    pub reference: Vec<Vec2>,
    pub start_time: f64,
    pub end_time: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLog {
    pub schema: String,
    pub scenario: String,
    pub seed: u64,
    pub dt: f64,
    pub status: EpisodeStatus,
    pub error: Option<String>,
    pub object: ObjectParams,
    pub start_pose: Pose2,
    pub final_pose: Pose2,
    pub final_time: f64,
    pub stages: Vec<StageLog>,
    pub records: Vec<StepRecord>,
}

impl TrajectoryLog {
    /// Largest number of contacts of any stage.
    pub fn contact_columns(&self) -> usize {
        self.stages.iter().map(|s| s.contacts.len()).max().unwrap_or(0)
    }

    pub fn csv_header(&self) -> String {
        let mut cols: Vec<String> = ["t", "x", "y", "theta"].iter().map(|s| s.to_string()).collect();
        for i in 0..self.contact_columns() {
            cols.extend([format!("c{i}_fx"), format!("c{i}_fy"), format!("c{i}_fn")]);
        }
        cols.extend(
            ["Wx", "Wy", "Wtau", "vx", "vy", "omega", "slack_min", "err_pos", "err_ang"].iter().map(|s| s.to_string()),
        );
        cols.join(",")
    }

    /// One header row, then one row per record. Missing contacts are zeros.
    pub fn to_csv(&self) -> String {
        let n = self.contact_columns();
        let mut out = self.csv_header();
        out.push('\n');
        for r in &self.records {
            let mut row = vec![r.time, r.pose.x, r.pose.y, r.pose.theta];
            for i in 0..n {
                match r.contacts.get(i) {
                    Some(c) => row.extend([c.fx, c.fy, c.f_n]),
                    None => row.extend([0.0; 3]),
                }
            }
            row.extend(r.wrench.as_array());
            row.extend(r.twist.as_array());
            row.extend([r.slack_min, r.err_pos, r.err_ang]);
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        // plain data with string keys cannot fail to serialize
        serde_json::to_string(self).expect("log serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let log: Self =
            serde_json::from_str(text).map_err(|e| Error::Schema { path: "$".into(), message: e.to_string() })?;
        if log.schema != LOG_SCHEMA {
            return Err(Error::Schema {
                path: "schema".into(),
                message: format!("expected {LOG_SCHEMA}, got {}", log.schema),
            });
        }
        Ok(log)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointStats {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

impl PointStats {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Self { mean, std: var.sqrt(), count: values.len() })
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        self.std / (self.count as f64).sqrt()
    }
}

/// Zero-lateral-slip point measured along a body axis through the CoP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalPoint {
    /// Mean point in the body frame.
    pub point: Vec2,
    /// Coordinate of the point along the axis.
    pub x: PointStats,
    /// Signed offset `−v·n/ω` from the CoP along the axis (`n` its left normal).
    pub offset: PointStats,
    /// Axis coordinate over steps turning counter-clockwise.
    pub ccw: Option<PointStats>,
    /// Axis coordinate over steps turning clockwise.
    pub cw: Option<PointStats>,
}

/// Per-step zero-lateral-slip point from logged twists, over the steps with
/// `|ω| > omega_min`. `axis` is the angle of the measuring axis in the body
/// frame (0 for the body x-axis).
pub fn empirical_tracking_point(records: &[StepRecord], axis: f64, omega_min: f64) -> Result<EmpiricalPoint> {
    let u = Vec2::new(axis.cos(), axis.sin());
    let n = Vec2::new(-u.y, u.x);
    let mut xs = Vec::new();
    let mut offsets = Vec::new();
    let mut points = Vec::new();
    let (mut ccw, mut cw) = (Vec::new(), Vec::new());
    for r in records {
        let w = r.twist.omega;
        if !(w.abs() > omega_min) {
            continue;
        }
        let offset = -Vec2::new(r.twist.vx, r.twist.vy).dot(&n) / w;
        let x = r.cop.dot(&u) + offset;
        offsets.push(offset);
        xs.push(x);
        points.push(r.cop + u * offset);
        if w > 0.0 {
            ccw.push(x)
        } else {
            cw.push(x)
        }
    }
    let (Some(x), Some(offset)) = (PointStats::of(&xs), PointStats::of(&offsets)) else {
        return Err(Error::InsufficientRotation(format!(
            "no step with |omega| > {omega_min} rad/s among {} records",
            records.len()
        )));
    };
    let point = points.iter().sum::<Vec2>() / points.len() as f64;
    Ok(EmpiricalPoint { point, x, offset, ccw: PointStats::of(&ccw), cw: PointStats::of(&cw) })
}
