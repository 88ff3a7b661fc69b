use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Result};
use crate::mechanics::{Pose2, Vec2};

fn default_eps_pos() -> f64 {
    0.005
}
fn default_eps_ang() -> f64 {
    1f64.to_radians()
}
fn default_taper() -> f64 {
    0.2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LookaheadParams {
    /// Longitudinal drive force (N).
    pub f_long: f64,
    /// Lateral alignment gain (N/m).
    pub k_lat: f64,
    /// Far look-ahead distance beyond the target (m); 1.5× object length when
    /// absent.
    #[serde(default)]
    pub lookahead: Option<f64>,
    /// Look-ahead used at the target (m); 0.3× object length when absent.
    #[serde(default)]
    pub lookahead_near: Option<f64>,
    /// Distance to the target over which the look-ahead tapers (m).
    #[serde(default = "default_taper")]
    pub taper: f64,
    #[serde(default = "default_eps_pos")]
    pub eps_pos: f64,
    #[serde(default = "default_eps_ang")]
    pub eps_ang: f64,
}

impl LookaheadParams {
    pub fn new(f_long: f64, k_lat: f64) -> Self {
        Self {
            f_long,
            k_lat,
            lookahead: None,
            lookahead_near: None,
            taper: default_taper(),
            eps_pos: default_eps_pos(),
            eps_ang: default_eps_ang(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("f_long", self.f_long)?;
        require_positive("k_lat", self.k_lat)?;
        require_positive("taper", self.taper)?;
        require_positive("eps_pos", self.eps_pos)?;
        require_positive("eps_ang", self.eps_ang)?;
        if let Some(l) = self.lookahead {
            require_positive("lookahead", l)?;
        }
        if let Some(l) = self.lookahead_near {
            require_positive("lookahead_near", l)?;
        }
        Ok(())
    }

    /// Look-ahead at `distance` from the target for an object of `length`.
    pub fn lookahead_at(&self, distance: f64, length: f64) -> f64 {
        let far = self.lookahead.unwrap_or(1.5 * length);
        let near = self.lookahead_near.unwrap_or(0.3 * length).min(far);
        if distance >= self.taper {
            far
        } else {
            near + (far - near) * distance / self.taper
        }
    }
}

/// Body-fixed unicycle: the zero-lateral-slip point and its forward axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnicycleAxle {
    pub point: Vec2,
    /// Unit forward direction (body frame).
    pub forward: Vec2,
}

impl UnicycleAxle {
    fn angle(&self) -> f64 {
        self.forward.y.atan2(self.forward.x)
    }

    /// World pose of the axle frame.
    pub fn pose(&self, object: &Pose2) -> Pose2 {
        object.compose(&Pose2::new(self.point.x, self.point.y, self.angle()))
    }
}

/// Force command steering the axle towards a virtual target on the goal line
/// (through the goal axle along the goal heading). The target sits `L` ahead
/// of the axle's projection on that line, so it passes the goal before the
/// axle does. Output: `f_long` along the direction to it
/// plus `k_lat` times the target's lateral offset from the axle's forward
/// axis, clipped to a circle of radius `f_max`. Zero once both tolerances on
/// the object pose hold. The result is in the body frame.
pub fn lookahead_unicycle(
    pose: &Pose2,
    goal: &Pose2,
    axle: &UnicycleAxle,
    params: &LookaheadParams,
    length: f64,
    f_max: f64,
) -> Vec2 {
    let (err_pos, err_ang) = pose.error_to(goal);
    if err_pos <= params.eps_pos && err_ang <= params.eps_ang {
        return Vec2::zeros();
    }
    let here = axle.pose(pose);
    let there = axle.pose(goal);
    let offset = there.inverse_transform_point(&here.position());
    let l = params.lookahead_at(offset.norm(), length);
    let target = there.transform_point(&Vec2::new(offset.x + l, 0.0));
    let to_target = here.inverse_transform_point(&target);
    let dist = to_target.norm();
    let dir = if dist > 0.0 { to_target / dist } else { Vec2::new(1.0, 0.0) };
    let mut u = dir * params.f_long;
    u.y += params.k_lat * to_target.y;
    let n = u.norm();
    if n > f_max {
        u *= f_max / n;
    }
    Pose2::new(0.0, 0.0, axle.angle()).rotate(&u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axle() -> UnicycleAxle {
        UnicycleAxle { point: Vec2::new(-0.5, 0.0), forward: Vec2::new(1.0, 0.0) }
    }

    #[test]
    fn aligned_on_line_is_pure_longitudinal() {
        let p = LookaheadParams::new(2.0, 10.0);
        let f = lookahead_unicycle(&Pose2::IDENTITY, &Pose2::new(1.0, 0.0, 0.0), &axle(), &p, 0.6, 4.0);
        assert!((f - Vec2::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn mirrored_offset_mirrors_command() {
        let p = LookaheadParams::new(2.0, 10.0);
        let goal = Pose2::new(1.0, 0.0, 0.0);
        let a = lookahead_unicycle(&Pose2::new(0.0, 0.1, 0.05), &goal, &axle(), &p, 0.6, 4.0);
        let b = lookahead_unicycle(&Pose2::new(0.0, -0.1, -0.05), &goal, &axle(), &p, 0.6, 4.0);
        assert!((a.x - b.x).abs() < 1e-12 && (a.y + b.y).abs() < 1e-12);
        assert!(a.y < 0.0);
    }

    #[test]
    fn clipped_to_circle() {
        let p = LookaheadParams::new(3.0, 100.0);
        let f = lookahead_unicycle(&Pose2::new(0.0, 0.5, 0.0), &Pose2::new(1.0, 0.0, 0.0), &axle(), &p, 0.6, 3.5);
        assert!((f.norm() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn zero_only_inside_both_tolerances() {
        let p = LookaheadParams::new(2.0, 10.0);
        let goal = Pose2::new(1.0, 0.0, 0.0);
        assert_eq!(lookahead_unicycle(&Pose2::new(0.998, 0.0, 0.0), &goal, &axle(), &p, 0.6, 4.0), Vec2::zeros());
        assert_ne!(lookahead_unicycle(&Pose2::new(0.998, 0.0, 0.03), &goal, &axle(), &p, 0.6, 4.0), Vec2::zeros());
        assert_ne!(lookahead_unicycle(&Pose2::new(0.99, 0.0, 0.0), &goal, &axle(), &p, 0.6, 4.0), Vec2::zeros());
    }

    #[test]
    fn lookahead_tapers() {
        let p = LookaheadParams::new(2.0, 10.0);
        assert!((p.lookahead_at(1.0, 0.6) - 0.9).abs() < 1e-12);
        assert!((p.lookahead_at(0.0, 0.6) - 0.18).abs() < 1e-12);
        assert!((p.lookahead_at(0.1, 0.6) - 0.54).abs() < 1e-12);
    }
}
