use serde::Serialize;

use crate::error::{require_positive, Error, Result};
use crate::mechanics::{perp, Vec2};
use crate::world::StepRecord;

/// Geometry needed to turn a measured tracking point into `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureGeometry {
    /// Pressing contact (body frame).
    pub contact: Vec2,
    pub r0: f64,
    /// Steps turning slower than this (rad/s) are ignored.
    pub omega_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PressureEstimate {
    pub c: f64,
    pub std_error: f64,
    /// Mean contact-to-CoP lever (m).
    pub lever: f64,
    /// Mean signed distance of the zero-slip point from the CoP along the
    /// lever (m); negative means opposite the contact.
    pub offset: f64,
    pub samples: usize,
}

/// Recovers the pressure constant from the zero-lateral-slip point observed
/// in a top-press log: `c = sqrt(d·|x̄|)/r0`.
pub fn estimate_pressure_constant(records: &[StepRecord], geom: &PressureGeometry) -> Result<PressureEstimate> {
    require_positive("r0", geom.r0)?;
    let mut offsets = Vec::new();
    let mut levers = Vec::new();
    for r in records {
        let w = r.twist.omega;
        if !(w.abs() > geom.omega_min) {
            continue;
        }
        let lever = geom.contact - r.cop;
        let d = lever.norm();
        if d < 1e-12 {
            return Err(Error::ContactAtCop);
        }
        let side = perp(&(lever / d));
        offsets.push(-r.twist.velocity().dot(&side) / w);
        levers.push(d);
    }
    if offsets.is_empty() {
        return Err(Error::InsufficientRotation(format!(
            "no step with |omega| > {} rad/s among {} records",
            geom.omega_min,
            records.len()
        )));
    }
    let n = offsets.len() as f64;
    let offset = offsets.iter().sum::<f64>() / n;
    let lever = levers.iter().sum::<f64>() / n;
    let var = offsets.iter().map(|o| (o - offset).powi(2)).sum::<f64>() / n;
    let c = (lever * offset.abs()).sqrt() / geom.r0;
    let std_error = if offset != 0.0 { c * (var.sqrt() / n.sqrt()) / (2.0 * offset.abs()) } else { f64::INFINITY };
    Ok(PressureEstimate { c, std_error, lever, offset, samples: offsets.len() })
}
