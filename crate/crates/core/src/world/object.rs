use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::mechanics::{LimitSurfaceModel, Pose2, GRAVITY};

/// Physical description of the manipulated object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectParams {
    /// Mass (kg).
    pub mass: f64,
    /// Footprint `[length along body x, width along body y]` (m).
    pub footprint: [f64; 2],
    pub mu: f64,
    pub c: f64,
    pub r0: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
}

fn default_lambda() -> f64 {
    0.5
}

impl ObjectParams {
    pub fn validate(&self) -> Result<()> {
        require_positive("mass", self.mass)?;
        require_positive("footprint length", self.footprint[0])?;
        require_positive("footprint width", self.footprint[1])?;
        // builds and discards a model to reuse its invariant checks
        LimitSurfaceModel::new(self.mu, self.weight(), self.c, self.r0, self.lambda).map(|_| ())
    }

    /// Weight (N).
    pub fn weight(&self) -> f64 {
        self.mass * GRAVITY
    }

    pub fn model(&self, n_total: f64) -> Result<LimitSurfaceModel> {
        LimitSurfaceModel::new(self.mu, n_total, self.c, self.r0, self.lambda)
    }

    /// Model under the object's own weight only.
    pub fn nominal_model(&self) -> Result<LimitSurfaceModel> {
        self.model(self.weight())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectState {
    pub pose: Pose2,
    pub params: ObjectParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Forward Euler in world coordinates.
    Euler,
    /// Explicit midpoint (RK2) in world coordinates.
    Midpoint,
    /// Exact flow of the step's constant body twist.
    #[default]
    Exponential,
}

fn default_dt() -> f64 {
    1e-3
}

fn default_max_steps() -> u64 {
    60_000
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub integrator: Integrator,
    /// Standard deviation of normal-force measurement noise (N).
    #[serde(default)]
    pub noise_std: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    /// Constant offset added to every normal-force measurement (N).
    #[serde(default)]
    pub measurement_bias: f64,
    /// Keep every `log_stride`-th step in the trajectory log.
    #[serde(default = "default_log_stride")]
    pub log_stride: u64,
}

fn default_log_stride() -> u64 {
    1
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            integrator: Integrator::default(),
            noise_std: 0.0,
            seed: 0,
            max_steps: default_max_steps(),
            measurement_bias: 0.0,
            log_stride: default_log_stride(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        require_positive("dt", self.dt)?;
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps > 0".into()));
        }
        if self.log_stride == 0 {
            return Err(Error::InvalidParameter("log_stride > 0".into()));
        }
        if !self.measurement_bias.is_finite() {
            return Err(Error::InvalidParameter("measurement_bias must be finite".into()));
        }
        if !(self.noise_std.is_finite() && self.noise_std >= 0.0) {
            return Err(Error::InvalidParameter(format!("noise_std >= 0 (got {})", self.noise_std)));
        }
        Ok(())
    }
}
