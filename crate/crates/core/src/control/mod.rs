//! Controllers, reference generation and mode selection.

mod controllers;
mod estimate;
mod lookahead;
mod pi;
mod pose;
mod reference;
mod select;
mod stanley;

pub use controllers::{build_controller, ControllerSpec};
pub use estimate::{estimate_pressure_constant, PressureEstimate, PressureGeometry};
pub use lookahead::{lookahead_unicycle, LookaheadParams, UnicycleAxle};
pub use pi::{pi_normal_force, PiGains, PiState};
pub use pose::{pose_pd_wrench, PoseGains};
pub use reference::{
    dubins_words, plan_path, plan_reference, tracking_pose, DubinsWord, PathConstraint, PathSample, PlanOptions,
    Projection, ReferencePath,
};
pub use select::{default_geometry, select_mode, ModeSelection, TaskSpec};
pub use stanley::{stanley_rws, StanleyGains, Steering, SteeringConvention};
