use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::mechanics::{normalize_angle, Pose2, Twist, Wrench};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseGains {
    /// Position gain (N/m).
    pub kp_pos: f64,
    /// Heading gain (N·m/rad).
    pub kp_ang: f64,
    #[serde(default)]
    pub kd_pos: f64,
    #[serde(default)]
    pub kd_ang: f64,
    /// Force magnitude limit (N).
    pub f_max: f64,
    /// Torque magnitude limit (N·m).
    pub tau_max: f64,
}

impl PoseGains {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("kp_pos", self.kp_pos), ("kp_ang", self.kp_ang), ("f_max", self.f_max), ("tau_max", self.tau_max)]
        {
            require_positive(name, v)?;
        }
        for (name, v) in [("kd_pos", self.kd_pos), ("kd_ang", self.kd_ang)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} >= 0 (got {v})")));
            }
        }
        Ok(())
    }
}

/// Decoupled PD wrench (body frame) driving the reference point at `pose`
/// towards `pose_ref`. `velocity` is the body twist at the same point.
pub fn pose_pd_wrench(pose: &Pose2, pose_ref: &Pose2, velocity: &Twist, gains: &PoseGains) -> Wrench {
    let e = pose.unrotate(&(pose_ref.position() - pose.position()));
    let e_theta = normalize_angle(pose_ref.theta - pose.theta);
    let mut f = e * gains.kp_pos - velocity.velocity() * gains.kd_pos;
    let n = f.norm();
    if n > gains.f_max {
        f *= gains.f_max / n;
    }
    let tau = (gains.kp_ang * e_theta - gains.kd_ang * velocity.omega).clamp(-gains.tau_max, gains.tau_max);
    Wrench::new(f.x, f.y, tau)
}
