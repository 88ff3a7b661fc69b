//! Reduced-order contact modes.
//!
//! Each topology maps the limit-surface mobility onto a wheeled-vehicle
//! analogue with a body-fixed tracking point, or onto a quasi-holonomic
//! platform driven through a closed-form allocator.

mod contact;
mod dual_top;
mod kinematics;
mod orthogonal;
mod registry;

pub use contact::{
    ContactForce, ContactForceSet, ContactKind, ContactMode, ContactPlacement, CopStrategy, Face, ModeGeometry,
    PivotSide, TrackingKind, TrackingPoint,
};
pub use dual_top::{dual_top_allocate, dual_top_wrench, DualTopAllocation, DualTopConfig, PIVOT_RELEASE_THRESHOLD};
pub use kinematics::{
    curvature_bound, diff_drive_twist, dual_rear_bicycle_twist, steering_angle, vfa_rear_push, virtual_axle_top,
    SteeringAngle,
};
pub use orthogonal::{
    orthogonal_allocate, orthogonal_allocate_compensated, orthogonal_min_bias, orthogonal_wrench, unicycle_regions,
    OrthogonalAllocation, Quadrant, UnicycleRegion, UnicycleRegions, DEFAULT_MIN_NORMAL,
};
pub use registry::{ModeKind, ModeTraits};
