use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Which way a positive steering angle turns the tracked point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteeringConvention {
    /// Rear-wheel steering (pushing): `δ = −θ_e − atan(k e / v)`.
    #[default]
    Push,
    /// Front-wheel steering (pulling): the same law with its sign flipped.
    Pull,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StanleyGains {
    /// Cross-track gain (1/s).
    pub k: f64,
    /// Forward speed (m/s).
    pub v_nominal: f64,
    /// Steering clamp (rad).
    pub delta_max: f64,
    #[serde(default)]
    pub convention: SteeringConvention,
}

impl StanleyGains {
    pub fn validate(&self, mu: f64) -> Result<()> {
        require_positive("k", self.k)?;
        require_positive("v_nominal", self.v_nominal)?;
        require_positive("delta_max", self.delta_max)?;
        if self.delta_max > mu.atan() {
            return Err(Error::InvalidParameter(format!(
                "delta_max <= atan(mu) = {:.6} (got {})",
                mu.atan(),
                self.delta_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Steering {
    pub delta: f64,
    /// Value before clamping.
    pub raw: f64,
    pub clamped: bool,
}

/// Stanley steering for a tracked point that lags the steering contact.
///
/// `theta_e` is path heading minus body heading; `e_vfa` is positive when the
/// path lies to the left of the tracked point.
pub fn stanley_rws(theta_e: f64, e_vfa: f64, v_x: f64, gains: &StanleyGains) -> Result<Steering> {
    if !(v_x > 0.0) {
        return Err(Error::InvalidParameter(format!("v_x > 0 (got {v_x})")));
    }
    let law = -theta_e - (gains.k * e_vfa / v_x).atan();
    let raw = match gains.convention {
        SteeringConvention::Push => law,
        SteeringConvention::Pull => -law,
    };
    let delta = raw.clamp(-gains.delta_max, gains.delta_max);
    Ok(Steering { delta, raw, clamped: delta != raw })
}
