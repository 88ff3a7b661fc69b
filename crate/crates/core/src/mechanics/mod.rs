//! Limit-surface mechanics: the ellipsoidal friction model, the normality
//! rule, wrench/twist mobility maps and centre-of-pressure algebra.
//!
//! All quantities are planar and expressed in the object body frame unless a
//! function says otherwise. Wrenches and twists carry no reference point of
//! their own; callers move them between points with [`Wrench::transport`] and
//! [`Twist::transport`].

mod cop;
mod limit_surface;
mod se2;
mod spatial;

pub use cop::{compute_cop, CopResult, NormalContact};
pub use limit_surface::{
    ls_value, normality_residual, rescale_mobility, twist_to_wrench, wrench_to_twist, LimitSurfaceModel,
};
pub use se2::{normalize_angle, Pose2};
pub use spatial::{cross2, perp, Twist, Vec2, Wrench};

/// Standard gravity used to turn object mass into weight (m/s²).
pub const GRAVITY: f64 = 9.81;
