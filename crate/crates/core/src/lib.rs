//! Quasi-static planar contact manipulation.
//!
//! The crate is layered bottom-up:
//!
//! * [`mechanics`] - ellipsoidal limit surface, normality rule, mobility maps,
//!   centre-of-pressure algebra and SE(2) helpers.
//! * [`modes`] - the five contact topologies, their tracking points and the
//!   closed-form force allocators.
//! * [`world`] - a deterministic quasi-static simulator driven by the
//!   limit-surface mobility map.
//! * [`control`] - Stanley steering, look-ahead unicycle regulation, pose
//!   regulation, PI normal-force loops, reference planning and mode selection.
//! * [`harness`] - scenario files, episode runner, sweeps and SVG plots.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod harness;
pub mod mechanics;
pub mod modes;
pub mod world;

pub use error::{Error, Result};
pub use mechanics::{LimitSurfaceModel, Pose2, Twist, Vec2, Wrench};
