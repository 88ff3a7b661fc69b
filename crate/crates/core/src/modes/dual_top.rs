//! Two top contacts: quasi-holonomic press-and-slide with CoP steering.

use serde::Serialize;

use super::contact::{ContactForce, ContactForceSet, ContactPlacement, CopStrategy, PivotSide};
use crate::error::{require_positive, Error, Result};
use crate::mechanics::{compute_cop, cross2, perp, CopResult, NormalContact, Vec2, Wrench};

/// A press below this force (N) counts as released.
pub const PIVOT_RELEASE_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualTopConfig {
    pub mu: f64,
    /// Object weight (N), acting at the body origin.
    pub n_obj: f64,
    /// Upper bound on the summed pressing force (N).
    pub n_budget: f64,
    /// Fraction of the friction circle held in reserve, in `[0, 1)`.
    pub margin: f64,
    /// Floor on each press in the balanced and target strategies (N).
    pub min_press: f64,
    pub strategy: CopStrategy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualTopAllocation {
    /// `[left, right]`.
    pub forces: ContactForceSet,
    pub contacts: [ContactPlacement; 2],
    pub cop: CopResult,
    /// Index of the contact whose press was dropped to zero, if any.
    pub released: Option<usize>,
}

/// Net CoM wrench of two top contacts with tangential forces `f_l`, `f_r`.
pub fn dual_top_wrench(f_l: &Vec2, f_r: &Vec2, p_l: &Vec2, p_r: &Vec2) -> Wrench {
    Wrench::new(f_l.x + f_r.x, f_l.y + f_r.y, (p_l.x * f_l.y - p_l.y * f_l.x) + (p_r.x * f_r.y - p_r.y * f_r.x))
}

/// Resolves a desired CoM wrench into two top-contact forces.
///
/// Tangentials: each contact carries half the net force plus an equal and
/// opposite couple perpendicular to `p_r − p_l` that supplies the remaining
/// torque. That is the least antagonistic shear among exact reconstructions.
/// Presses: the smallest satisfying `μ f_z (1 − margin) ≥ ‖f‖`, then adjusted
/// by the CoP strategy.
pub fn dual_top_allocate(w_des: &Wrench, p_l: &Vec2, p_r: &Vec2, cfg: &DualTopConfig) -> Result<DualTopAllocation> {
    require_positive("mu", cfg.mu)?;
    require_positive("n_budget", cfg.n_budget)?;
    if !(0.0..1.0).contains(&cfg.margin) {
        return Err(Error::InvalidParameter(format!("margin in [0, 1) (got {})", cfg.margin)));
    }
    if !w_des.is_finite() {
        return Err(Error::InvalidParameter("desired wrench must be finite".into()));
    }
    let weight = NormalContact::new(Vec2::zeros(), cfg.n_obj);
    let capacity = cfg.mu * (1.0 - cfg.margin);

    if let CopStrategy::Pivot { about, push_point, push_normal } = cfg.strategy {
        return allocate_pivot(w_des, p_l, p_r, about, push_point, push_normal, cfg, &weight);
    }

    let span = p_r - p_l;
    let len = span.norm();
    if len < 1e-12 {
        return Err(Error::InfeasibleTorque("coincident contacts cannot produce a couple".into()));
    }
    let shared = w_des.force() / 2.0;
    let tau_shared = cross2(p_l, &shared) + cross2(p_r, &shared);
    let couple = perp(&span) / len * ((w_des.tau - tau_shared) / len);
    let f_l = shared - couple;
    let f_r = shared + couple;

    let req_l = f_l.norm() / capacity;
    let req_r = f_r.norm() / capacity;
    let (n_l, n_r) = match cfg.strategy {
        CopStrategy::Balanced => (req_l.max(cfg.min_press), req_r.max(cfg.min_press)),
        CopStrategy::Target { cop } => presses_for_cop(&cop, p_l, p_r, cfg.n_obj, req_l, req_r, cfg.min_press)?,
        CopStrategy::Pivot { .. } => unreachable!(),
    };
    let total = n_l + n_r;
    if total > cfg.n_budget {
        return Err(Error::BudgetExceeded { required: total, budget: cfg.n_budget });
    }
    let cop = compute_cop(&weight, &[NormalContact::new(*p_l, n_l), NormalContact::new(*p_r, n_r)])?;
    let forces = ContactForceSet::new(vec![ContactForce::new(f_l, n_l), ContactForce::new(f_r, n_r)], cfg.mu);
    let released = forces.forces.iter().position(|f| f.normal < PIVOT_RELEASE_THRESHOLD && total > 0.0);
    Ok(DualTopAllocation {
        forces,
        contacts: [ContactPlacement::top(*p_l), ContactPlacement::top(*p_r)],
        cop,
        released,
    })
}

/// Presses placing the CoP at `target`, scaled up uniformly if either falls
/// below its Coulomb minimum or the floor.
fn presses_for_cop(
    target: &Vec2,
    p_l: &Vec2,
    p_r: &Vec2,
    n_obj: f64,
    req_l: f64,
    req_r: f64,
    floor: f64,
) -> Result<(f64, f64)> {
    // n_l (p_l − c) + n_r (p_r − c) = n_obj c
    let a = p_l - target;
    let b = p_r - target;
    let det = cross2(&a, &b);
    let rhs = target * n_obj;
    if det.abs() < 1e-12 {
        return Err(Error::InvalidParameter("CoP target collinear with both contacts".into()));
    }
    let n_l = cross2(&rhs, &b) / det;
    let n_r = cross2(&a, &rhs) / det;
    if n_l < 0.0 || n_r < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "CoP target ({:.4}, {:.4}) outside the reachable triangle",
            target.x, target.y
        )));
    }
    let need_l = req_l.max(floor);
    let need_r = req_r.max(floor);
    let mut scale: f64 = 1.0;
    for (n, need) in [(n_l, need_l), (n_r, need_r)] {
        if need > n {
            if n <= 0.0 {
                return Err(Error::InvalidParameter("CoP target leaves a loaded contact with zero press".into()));
            }
            scale = scale.max(need / n);
        }
    }
    Ok((n_l * scale, n_r * scale))
}

#[allow(clippy::too_many_arguments)]
fn allocate_pivot(
    w_des: &Wrench,
    p_l: &Vec2,
    p_r: &Vec2,
    about: PivotSide,
    push_point: Vec2,
    push_normal: Vec2,
    cfg: &DualTopConfig,
    weight: &NormalContact,
) -> Result<DualTopAllocation> {
    let anchor = match about {
        PivotSide::Left => *p_l,
        PivotSide::Right => *p_r,
    };
    let n = push_normal.normalize();
    let denom = cross2(&(push_point - anchor), &n);
    if denom.abs() < 1e-12 {
        return Err(Error::InfeasibleTorque("push line passes through the pivot contact".into()));
    }
    let push = (w_des.tau - cross2(&anchor, &w_des.force())) / denom;
    if push < 0.0 {
        return Err(Error::InfeasibleTorque(format!(
            "pivot push would need to pull ({push:.4} N) for this torque sign"
        )));
    }
    let f_anchor = w_des.force() - n * push;
    let required = f_anchor.norm() / (cfg.mu * (1.0 - cfg.margin));
    if required > cfg.n_budget {
        return Err(Error::BudgetExceeded { required, budget: cfg.n_budget });
    }
    let pressed = ContactForce::new(f_anchor, cfg.n_budget);
    let pusher = ContactForce::new(Vec2::zeros(), push);
    let top = ContactPlacement::top(anchor);
    let edge = ContactPlacement::edge(push_point, n);
    let (forces, contacts, released) = match about {
        PivotSide::Left => (vec![pressed, pusher], [top, edge], 1),
        PivotSide::Right => (vec![pusher, pressed], [edge, top], 0),
    };
    let cop = compute_cop(weight, &[NormalContact::new(anchor, cfg.n_budget)])?;
    Ok(DualTopAllocation { forces: ContactForceSet::new(forces, cfg.mu), contacts, cop, released: Some(released) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(strategy: CopStrategy) -> DualTopConfig {
        DualTopConfig { mu: 0.5, n_obj: 2.0, n_budget: 100.0, margin: 0.0, min_press: 0.0, strategy }
    }

    #[test]
    fn wrench_examples() {
        let z = Vec2::zeros();
        assert_eq!(dual_top_wrench(&z, &z, &Vec2::new(0.1, 0.0), &Vec2::new(-0.1, 0.0)), Wrench::ZERO);
        let w = dual_top_wrench(&Vec2::new(0.0, 1.0), &z, &Vec2::new(0.1, 0.0), &Vec2::new(-0.1, 0.0));
        assert_eq!(w, Wrench::new(0.0, 1.0, 0.1));
        let w =
            dual_top_wrench(&Vec2::new(0.0, 1.0), &Vec2::new(0.0, -1.0), &Vec2::new(0.1, 0.0), &Vec2::new(-0.1, 0.0));
        assert_eq!((w.fx, w.fy), (0.0, 0.0));
        assert!((w.tau - 0.2).abs() < 1e-15);
    }

    #[test]
    fn pure_translation_example() {
        let p_l = Vec2::new(0.0, 0.1);
        let p_r = Vec2::new(0.0, -0.1);
        let a = dual_top_allocate(&Wrench::new(1.0, 0.0, 0.0), &p_l, &p_r, &cfg(CopStrategy::Balanced)).unwrap();
        let [l, r] = [a.forces.forces[0], a.forces.forces[1]];
        assert!((l.tangential - Vec2::new(0.5, 0.0)).norm() < 1e-15);
        assert!((r.tangential - Vec2::new(0.5, 0.0)).norm() < 1e-15);
        assert!((l.normal - 1.0).abs() < 1e-15 && (r.normal - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_torque_is_antisymmetric() {
        let p_l = Vec2::new(0.0, 0.2);
        let p_r = Vec2::new(0.0, -0.2);
        let a = dual_top_allocate(&Wrench::new(0.0, 0.0, 0.4), &p_l, &p_r, &cfg(CopStrategy::Balanced)).unwrap();
        let [l, r] = [a.forces.forces[0], a.forces.forces[1]];
        assert!((l.tangential + r.tangential).norm() < 1e-15);
        assert_eq!(l.normal, r.normal);
        let w = dual_top_wrench(&l.tangential, &r.tangential, &p_l, &p_r);
        assert!((w.tau - 0.4).abs() < 1e-15);
        assert!(a.cop.cop.norm() < 1e-15);
    }

    #[test]
    fn pivot_releases_far_press() {
        let p_l = Vec2::new(-0.1, 0.15);
        let p_r = Vec2::new(0.1, -0.15);
        let strategy = CopStrategy::Pivot {
            about: PivotSide::Left,
            push_point: Vec2::new(0.25, -0.4),
            push_normal: Vec2::new(0.0, 1.0),
        };
        let a = dual_top_allocate(&Wrench::new(0.0, 0.0, 1.0), &p_l, &p_r, &cfg(strategy)).unwrap();
        assert_eq!(a.released, Some(1));
        assert_eq!(a.forces.forces[0].normal, 100.0);
        assert!(a.contacts[1].pressing_force(&a.forces.forces[1]) < PIVOT_RELEASE_THRESHOLD);
        let w: Wrench = a
            .contacts
            .iter()
            .zip(&a.forces.forces)
            .map(|(c, f)| Wrench::from_force_at(c.position, c.planar_force(f)))
            .sum();
        assert!((w - Wrench::new(0.0, 0.0, 1.0)).norm() < 1e-14);
        // CoP pulled onto the pressing contact
        assert!((a.cop.cop - p_l).norm() < 0.005);
        // opposite torque sign cannot be pushed
        assert!(dual_top_allocate(&Wrench::new(0.0, 0.0, -1.0), &p_l, &p_r, &cfg(strategy)).is_err());
    }

    #[test]
    fn cop_target_and_budget() {
        let p_l = Vec2::new(0.2, 0.2);
        let p_r = Vec2::new(0.2, -0.2);
        let target = Vec2::new(0.1, 0.05);
        let a = dual_top_allocate(&Wrench::new(0.2, 0.0, 0.0), &p_l, &p_r, &cfg(CopStrategy::Target { cop: target }))
            .unwrap();
        assert!((a.cop.cop - target).norm() < 1e-12);
        assert!(a.forces.min_slack() >= -1e-12);
        let mut tight = cfg(CopStrategy::Balanced);
        tight.n_budget = 0.5;
        assert!(matches!(
            dual_top_allocate(&Wrench::new(1.0, 0.0, 0.0), &p_l, &p_r, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        // CoM and both contacts collinear: no triangle to steer inside
        let line = cfg(CopStrategy::Target { cop: Vec2::new(0.0, 0.1) });
        assert!(dual_top_allocate(&Wrench::ZERO, &Vec2::new(0.0, 0.2), &Vec2::new(0.0, -0.2), &line).is_err());
    }

    #[test]
    fn coincident_contacts_cannot_twist() {
        let p = Vec2::new(0.1, 0.1);
        assert!(matches!(
            dual_top_allocate(&Wrench::new(0.0, 0.0, 1.0), &p, &p, &cfg(CopStrategy::Balanced)),
            Err(Error::InfeasibleTorque(_))
        ));
    }
}
