//! Wheeled-vehicle analogues of the edge-push and single top-press modes.

use serde::Serialize;

use super::contact::{TrackingKind, TrackingPoint};
use crate::error::{require_positive, Error, Result};
use crate::mechanics::{LimitSurfaceModel, Twist, Vec2};

/// Virtual front axle of a rear push at `[-d, 0]`: `x = (c r0)² / d` ahead of
/// the CoM. Also the tracking point of the synchronised dual rear push.
pub fn vfa_rear_push(c: f64, r0: f64, d: f64) -> Result<TrackingPoint> {
    require_positive("d", d)?;
    let l2 = (c * r0) * (c * r0);
    Ok(TrackingPoint { kind: TrackingKind::Vfa, position: Vec2::new(l2 / d, 0.0) })
}

/// Result of mapping a pusher force to an effective steering angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteeringAngle {
    /// Steering angle clamped to `±atan(μ)`.
    pub delta: f64,
    /// `atan2(fy, fx)` before clamping.
    pub raw: f64,
    /// `true` when `|fy| > μ fx`: the force left the friction cone.
    pub clamped: bool,
}

/// `tan δ = fy / fx`, bounded by the friction cone `|δ| ≤ atan μ`.
pub fn steering_angle(fx: f64, fy: f64, mu: f64) -> Result<SteeringAngle> {
    if !(fx > 0.0) {
        return Err(Error::PusherSeparating { fx });
    }
    require_positive("mu", mu)?;
    let raw = fy.atan2(fx);
    let limit = mu.atan();
    let clamped = fy.abs() > mu * fx;
    Ok(SteeringAngle { delta: raw.clamp(-limit, limit), raw, clamped })
}

/// Path curvature of a rear push with steering angle `delta`:
/// `κ = −(d / (c r0)²) tan δ`. Expects `d > 0`.
pub fn curvature_bound(delta: f64, d: f64, c: f64, r0: f64) -> f64 {
    -(d / ((c * r0) * (c * r0))) * delta.tan()
}

/// Virtual axle of a single top press at lever `d` from the CoP.
///
/// The returned position is measured from the CoP along the CoP→contact
/// direction: `−(c r0)² / d`. It does not depend on the applied planar force.
pub fn virtual_axle_top(c: f64, r0: f64, d: f64) -> Result<TrackingPoint> {
    if d == 0.0 {
        return Err(Error::ContactAtCop);
    }
    if !d.is_finite() {
        return Err(Error::InvalidParameter(format!("d must be finite (got {d})")));
    }
    let l2 = (c * r0) * (c * r0);
    Ok(TrackingPoint { kind: TrackingKind::VirtualAxle, position: Vec2::new(-l2 / d, 0.0) })
}

/// Twist of the synchronised dual rear push: both contacts apply `(fx, fy)`.
pub fn dual_rear_bicycle_twist(fx: f64, fy: f64, model: &LimitSurfaceModel, d_x: f64) -> Result<Twist> {
    let slack = model.mu() * fx - fy.abs();
    if slack < 0.0 {
        return Err(Error::ConeViolation { contact: 0, slack });
    }
    Ok(Twist::new(model.alpha() * 2.0 * fx, model.alpha() * 2.0 * fy, -model.beta() * d_x * 2.0 * fy))
}

/// Differential-drive twist from pure normal pushes at `[-d_x, ±w]`.
pub fn diff_drive_twist(fx_l: f64, fx_r: f64, model: &LimitSurfaceModel, w: f64) -> Result<Twist> {
    if fx_l < 0.0 || fx_r < 0.0 || !fx_l.is_finite() || !fx_r.is_finite() {
        return Err(Error::InvalidParameter(format!("pushing forces >= 0 (got {fx_l}, {fx_r})")));
    }
    Ok(Twist::new(model.alpha() * (fx_l + fx_r), 0.0, model.beta() * w * (fx_r - fx_l)))
}
