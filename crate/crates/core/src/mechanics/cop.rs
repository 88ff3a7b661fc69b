use serde::{Deserialize, Serialize};

use super::spatial::Vec2;
use crate::error::{require_finite, Error, Result};

/// Downward normal load at a body-frame point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalContact {
    pub position: Vec2,
    pub force: f64,
}

impl NormalContact {
    pub fn new(position: Vec2, force: f64) -> Self {
        Self { position, force }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CopResult {
    pub cop: Vec2,
    pub n_total: f64,
}

/// Centre of pressure and total normal force of the object weight plus any
/// number of pressing contacts.
pub fn compute_cop(object_weight: &NormalContact, contacts: &[NormalContact]) -> Result<CopResult> {
    if !(object_weight.force.is_finite() && object_weight.force >= 0.0) {
        return Err(Error::InvalidParameter(format!("object weight >= 0 (got {})", object_weight.force)));
    }
    let mut n_total = object_weight.force;
    let mut moment = object_weight.position * object_weight.force;
    for (i, c) in contacts.iter().enumerate() {
        require_finite("contact position", c.position.x)?;
        require_finite("contact position", c.position.y)?;
        if !(c.force.is_finite() && c.force >= 0.0) {
            return Err(Error::InvalidParameter(format!("contact {i} normal force >= 0 (got {})", c.force)));
        }
        n_total += c.force;
        moment += c.position * c.force;
    }
    if n_total <= 0.0 {
        return Err(Error::ZeroNormalForce);
    }
    Ok(CopResult { cop: moment / n_total, n_total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_press_shifts_cop() {
        let weight = NormalContact::new(Vec2::zeros(), 0.3 * 9.81);
        let r = compute_cop(&weight, &[NormalContact::new(Vec2::new(0.2, 0.0), 8.0)]).unwrap();
        assert!((r.n_total - 10.943).abs() < 1e-12);
        assert!((r.cop.x - 1.6 / 10.943).abs() < 1e-12);
        let lever = 0.2 - r.cop.x;
        assert!((lever - 0.054).abs() < 1e-3, "lever {lever}");
    }

    #[test]
    fn no_contacts_gives_com() {
        let weight = NormalContact::new(Vec2::new(0.01, -0.02), 5.0);
        let r = compute_cop(&weight, &[]).unwrap();
        assert_eq!(r.cop, weight.position);
        assert_eq!(r.n_total, 5.0);
    }

    #[test]
    fn symmetric_contacts_keep_com() {
        let weight = NormalContact::new(Vec2::zeros(), 2.0);
        let r = compute_cop(
            &weight,
            &[NormalContact::new(Vec2::new(0.1, 0.3), 4.0), NormalContact::new(Vec2::new(-0.1, -0.3), 4.0)],
        )
        .unwrap();
        assert!(r.cop.norm() < 1e-15);
    }

    #[test]
    fn zero_total_rejected() {
        let weight = NormalContact::new(Vec2::zeros(), 0.0);
        assert_eq!(compute_cop(&weight, &[]), Err(Error::ZeroNormalForce));
        let bad = NormalContact::new(Vec2::zeros(), -1.0);
        assert!(compute_cop(&NormalContact::new(Vec2::zeros(), 1.0), &[bad]).is_err());
    }
}
