use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_kp() -> f64 {
    0.5
}
fn default_ki() -> f64 {
    2.0
}
fn default_windup() -> f64 {
    5.0
}

/// Gains of the normal-force PI regulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiGains {
    #[serde(default = "default_kp")]
    pub kp: f64,
    #[serde(default = "default_ki")]
    pub ki: f64,
    /// Bound on the integral state (N·s).
    #[serde(default = "default_windup")]
    pub windup_limit: f64,
}

impl Default for PiGains {
    fn default() -> Self {
        Self { kp: default_kp(), ki: default_ki(), windup_limit: default_windup() }
    }
}

impl PiGains {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("windup_limit", self.windup_limit)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} >= 0 (got {v})")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PiState {
    pub kp: f64,
    pub ki: f64,
    pub integral: f64,
    pub windup_limit: f64,
}

impl PiState {
    pub fn new(gains: PiGains) -> Self {
        Self { kp: gains.kp, ki: gains.ki, integral: 0.0, windup_limit: gains.windup_limit }
    }
}

/// Regulated normal force `f_cmd + kp·e + ki·∫e`, with `e = f_cmd − f_meas`,
/// the integral clamped to `±windup_limit` and the output floored at zero.
pub fn pi_normal_force(f_cmd: f64, f_meas: f64, pi: &mut PiState, dt: f64) -> f64 {
    debug_assert!(dt > 0.0);
    let e = f_cmd - f_meas;
    pi.integral = (pi.integral + e * dt).clamp(-pi.windup_limit, pi.windup_limit);
    (f_cmd + pi.kp * e + pi.ki * pi.integral).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matched_measurement_passes_through() {
        let mut pi = PiState::new(PiGains::default());
        for _ in 0..100 {
            assert_eq!(pi_normal_force(8.0, 8.0, &mut pi, 1e-3), 8.0);
        }
        assert_eq!(pi.integral, 0.0);
    }

    #[test]
    fn zero_gains_pass_through() {
        let mut pi = PiState::new(PiGains { kp: 0.0, ki: 0.0, windup_limit: 5.0 });
        assert_eq!(pi_normal_force(3.0, 7.0, &mut pi, 1e-3), 3.0);
    }

    #[test]
    fn integral_is_clamped_and_output_floored() {
        let mut pi = PiState::new(PiGains { kp: 0.5, ki: 2.0, windup_limit: 0.1 });
        for _ in 0..1000 {
            let out = pi_normal_force(1.0, 50.0, &mut pi, 1e-2);
            assert!(pi.integral.abs() <= 0.1);
            assert!(out >= 0.0);
        }
        assert_eq!(pi.integral, -0.1);
    }
}
