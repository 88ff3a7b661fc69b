use serde::Serialize;

use super::object::{Integrator, ObjectState, SimConfig};
use crate::error::{Error, Result};
use crate::mechanics::{compute_cop, wrench_to_twist, NormalContact, Twist, Vec2, Wrench};
use crate::modes::{ContactForceSet, ContactKind, ContactMode};

/// Absolute tolerance (N) on friction-cone slack and on edge-force
/// tangentiality.
pub const CONE_TOLERANCE: f64 = 1e-9;

/// Everything one step derived from the applied forces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepOutcome {
    /// Net contact wrench about the centre of pressure (body frame).
    pub wrench: Wrench,
    /// Body twist expressed at the centre of pressure.
    pub twist: Twist,
    /// Body twist expressed at the body origin.
    pub twist_origin: Twist,
    pub cop: Vec2,
    pub n_total: f64,
    pub slack: Vec<f64>,
}

/// Advances the object by one timestep under the given contact forces.
pub fn step(
    state: &ObjectState,
    forces: &ContactForceSet,
    mode: &ContactMode,
    cfg: &SimConfig,
) -> Result<(ObjectState, StepOutcome)> {
    let contacts = mode.contacts();
    if forces.len() != contacts.len() {
        return Err(Error::ModeMismatch(format!("{} forces for {} contacts", forces.len(), contacts.len())));
    }
    let mu = state.params.mu;
    let mut slack = Vec::with_capacity(contacts.len());
    let mut presses = Vec::new();
    for (i, (placement, f)) in contacts.iter().zip(&forces.forces).enumerate() {
        if !(f.normal.is_finite() && f.tangential.x.is_finite() && f.tangential.y.is_finite()) {
            return Err(Error::InvalidParameter(format!("contact {i} force must be finite")));
        }
        if f.normal < 0.0 {
            return Err(Error::ContactLost { contact: i, normal: f.normal });
        }
        if let ContactKind::Edge { normal } = placement.kind {
            let along = f.tangential.dot(&normal);
            if along.abs() > CONE_TOLERANCE {
                return Err(Error::ModeMismatch(format!(
                    "contact {i} tangential force has {along:.3e} N along the face normal"
                )));
            }
        }
        let s = f.slack(mu);
        if s < -CONE_TOLERANCE {
            return Err(Error::SlipBoundaryExceeded { contact: i, slack: s });
        }
        slack.push(s);
        if placement.is_top() {
            presses.push(NormalContact::new(placement.position, f.normal));
        }
    }

    let weight = NormalContact::new(Vec2::zeros(), state.params.weight());
    let cop = compute_cop(&weight, &presses)?;
    let model = state.params.model(cop.n_total)?;

    let wrench: Wrench = contacts
        .iter()
        .zip(&forces.forces)
        .map(|(p, f)| Wrench::from_force_at(p.position - cop.cop, p.planar_force(f)))
        .sum();
    let twist = wrench_to_twist(&wrench, &model);
    let twist_origin = twist.transport(cop.cop, Vec2::zeros());

    let pose = match cfg.integrator {
        Integrator::Euler => state.pose.euler_step(&twist_origin, cfg.dt),
        Integrator::Midpoint => state.pose.midpoint_step(&twist_origin, cfg.dt),
        Integrator::Exponential => state.pose.exp_step(&twist_origin, cfg.dt),
    };
    Ok((
        ObjectState { pose, params: state.params },
        StepOutcome { wrench, twist, twist_origin, cop: cop.cop, n_total: cop.n_total, slack },
    ))
}
