//! Orthogonal bimanual pushing: a rear contact at `[-d, 0]` pushing along +x
//! and a left contact at `[0, d]` pushing along −y.

use serde::Serialize;

use super::contact::{ContactForce, ContactForceSet};
use crate::error::{require_positive, Error, Result};
use crate::mechanics::{LimitSurfaceModel, Vec2, Wrench};

/// Smallest normal force the default bias keeps on each pusher (N).
pub const DEFAULT_MIN_NORMAL: f64 = 0.1;

/// Net CoM wrench of the two orthogonal contacts.
///
/// `f_xb`, `f_yl` are the unilateral normals; `f_yb`, `f_xl` the frictional
/// components.
pub fn orthogonal_wrench(f_xb: f64, f_yb: f64, f_xl: f64, f_yl: f64, d: f64) -> Result<Wrench> {
    if f_xb < 0.0 || f_yl < 0.0 {
        return Err(Error::InvalidParameter(format!("pusher normals >= 0 (got f_xB={f_xb}, f_yL={f_yl})")));
    }
    Ok(Wrench::new(f_xb + f_xl, f_yb - f_yl, -d * (f_yb + f_xl)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalAllocation {
    pub f_xb: f64,
    pub f_yb: f64,
    pub f_xl: f64,
    pub f_yl: f64,
    pub f_bias: f64,
    /// `[bottom, left]` in body-frame tangential/normal form.
    pub forces: ContactForceSet,
    /// Realised minus desired wrench: `(+f_bias, −f_bias, 0)` for the plain
    /// allocator, zero for the compensated one.
    pub residual: Wrench,
}

/// Splits the rotational friction symmetrically (`f_yB = f_xL = −τ*/2d`) and
/// solves for the normals with an internal bias.
///
/// The reconstructed torque is exact; the reconstructed force is offset by
/// exactly `(+f_bias, −f_bias)`.
pub fn orthogonal_allocate(w_des: &Wrench, d: f64, f_bias: f64, mu: f64) -> Result<OrthogonalAllocation> {
    require_positive("d", d)?;
    require_positive("mu", mu)?;
    if !(f_bias.is_finite() && f_bias >= 0.0) {
        return Err(Error::InvalidParameter(format!("f_bias >= 0 (got {f_bias})")));
    }
    let shear = -w_des.tau / (2.0 * d);
    let f_xb = w_des.fx - shear + f_bias;
    let f_yl = -w_des.fy + shear + f_bias;
    let base_b = w_des.fx - shear;
    let base_l = -w_des.fy + shear;
    let min_bias = (-base_b).max(-base_l).max(0.0);
    if f_xb < 0.0 {
        return Err(Error::IncreaseBias { contact: 0, min_bias });
    }
    if f_yl < 0.0 {
        return Err(Error::IncreaseBias { contact: 1, min_bias });
    }
    let forces = ContactForceSet::new(
        vec![ContactForce::new(Vec2::new(0.0, shear), f_xb), ContactForce::new(Vec2::new(shear, 0.0), f_yl)],
        mu,
    );
    for (i, s) in forces.slack.iter().enumerate() {
        if *s < 0.0 {
            return Err(Error::ConeViolation { contact: i, slack: *s });
        }
    }
    let realized = orthogonal_wrench(f_xb, shear, shear, f_yl, d)?;
    Ok(OrthogonalAllocation { f_xb, f_yb: shear, f_xl: shear, f_yl, f_bias, forces, residual: realized - *w_des })
}

/// Allocates `W* − (f_bias, −f_bias, 0)` so the realised wrench equals `W*`.
///
/// The bias then cancels out of both normals, so this succeeds only where the
/// unbiased allocation is already unilateral.
pub fn orthogonal_allocate_compensated(w_des: &Wrench, d: f64, f_bias: f64, mu: f64) -> Result<OrthogonalAllocation> {
    let shifted = *w_des - Wrench::new(f_bias, -f_bias, 0.0);
    let mut alloc = orthogonal_allocate(&shifted, d, f_bias, mu)?;
    alloc.residual = orthogonal_wrench(alloc.f_xb, alloc.f_yb, alloc.f_xl, alloc.f_yl, d)? - *w_des;
    Ok(alloc)
}

/// Smallest bias keeping both normals at least `f_min` and, when `mu` is
/// given, both contacts inside their friction cones.
pub fn orthogonal_min_bias(w_des: &Wrench, d: f64, f_min: f64, mu: Option<f64>) -> f64 {
    let shear = -w_des.tau / (2.0 * d);
    let base_b = w_des.fx - shear;
    let base_l = -w_des.fy + shear;
    let mut need = (f_min - base_b).max(f_min - base_l).max(0.0);
    if let Some(mu) = mu {
        let cone = shear.abs() / mu;
        need = need.max(cone - base_b).max(cone - base_l);
    }
    need
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quadrant {
    First,
    Second,
    Third,
    Fourth,
}

impl Quadrant {
    fn contains(self, p: &Vec2) -> bool {
        match self {
            Quadrant::First => p.x > 0.0 && p.y > 0.0,
            Quadrant::Second => p.x < 0.0 && p.y > 0.0,
            Quadrant::Third => p.x < 0.0 && p.y < 0.0,
            Quadrant::Fourth => p.x > 0.0 && p.y < 0.0,
        }
    }
}

/// Annular sector `{p : p in quadrant, r_min <= |p| <= r_max}` about the CoM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnicycleRegion {
    pub quadrant: Quadrant,
    pub r_min: f64,
    pub r_max: f64,
}

impl UnicycleRegion {
    pub fn contains(&self, p: &Vec2) -> bool {
        let r = p.norm();
        self.quadrant.contains(p) && r >= self.r_min && r <= self.r_max
    }
}

/// Achievable unicycle points of the orthogonal push, split by rotation sense.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnicycleRegions {
    /// `K = α / (β d)`.
    pub k_base: f64,
    pub d_min: f64,
    pub d_max: f64,
    /// Single-arm bicycle tracking point distance `K / μ`.
    pub bicycle_point: f64,
    pub cw_region: UnicycleRegion,
    pub ccw_region: UnicycleRegion,
    /// Whether `K / μ` falls inside `[d_min, d_max]`.
    pub bicycle_point_in_region: bool,
}

/// Region boundaries `d_min = (1−μ²)/μ² K`, `d_max = (1+μ²)/μ² K`, measured
/// from the CoM.
///
/// The two sectors sit in the quadrants an ICR can occupy for each rotation
/// sense given that the rear pusher always drives +x and the left pusher −y:
/// counter-clockwise motion puts the ICR in the first quadrant, clockwise in
/// the third.
pub fn unicycle_regions(mu: f64, model: &LimitSurfaceModel, d: f64) -> Result<UnicycleRegions> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::InvalidParameter(format!("0 < mu < 1 (got {mu})")));
    }
    require_positive("d", d)?;
    let k = model.alpha() / (model.beta() * d);
    let mu2 = mu * mu;
    let d_min = (1.0 - mu2) / mu2 * k;
    let d_max = (1.0 + mu2) / mu2 * k;
    let bicycle_point = k / mu;
    Ok(UnicycleRegions {
        k_base: k,
        d_min,
        d_max,
        bicycle_point,
        cw_region: UnicycleRegion { quadrant: Quadrant::Third, r_min: d_min, r_max: d_max },
        ccw_region: UnicycleRegion { quadrant: Quadrant::First, r_min: d_min, r_max: d_max },
        bicycle_point_in_region: bicycle_point >= d_min && bicycle_point <= d_max,
    })
}
