//! Deterministic quasi-static SE(2) simulator.
//!
//! Each step assembles the net contact wrench about the current centre of
//! pressure, rescales the mobilities for the current total normal load and
//! integrates the resulting body twist. Contacts stay fixed in the body frame.

mod episode;
mod log;
mod noise;
mod object;
mod step;

pub use episode::{run_episode, Controller, Episode, EpisodeStage, Observation};
pub use log::{
    empirical_tracking_point, ContactRecord, EmpiricalPoint, EpisodeStatus, PointStats, StageLog, StepRecord,
    TrajectoryLog, LOG_SCHEMA,
};
pub use noise::{measure_normal, SimRng};
pub use object::{Integrator, ObjectParams, ObjectState, SimConfig};
pub use step::{step, StepOutcome, CONE_TOLERANCE};
