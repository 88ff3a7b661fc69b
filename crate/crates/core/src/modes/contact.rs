use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::registry::ModeKind;
use crate::error::{require_finite, require_positive, Error, Result};
use crate::mechanics::{compute_cop, NormalContact, Pose2, Vec2};

/// How a robot contact touches the object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactKind {
    /// Presses down on the top face; tangential force is bounded by a 2D
    /// friction circle of radius `μ · normal`.
    Top,
    /// Pushes on a side face along the inward unit `normal` (body frame);
    /// tangential force runs along the face.
    Edge { normal: Vec2 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactPlacement {
    pub position: Vec2,
    pub kind: ContactKind,
}

impl ContactPlacement {
    pub fn top(position: Vec2) -> Self {
        Self { position, kind: ContactKind::Top }
    }

    pub fn edge(position: Vec2, normal: Vec2) -> Self {
        Self { position, kind: ContactKind::Edge { normal: normal.normalize() } }
    }

    /// In-plane force the contact exerts on the object (body frame).
    pub fn planar_force(&self, f: &ContactForce) -> Vec2 {
        match self.kind {
            ContactKind::Top => f.tangential,
            ContactKind::Edge { normal } => normal * f.normal + f.tangential,
        }
    }

    /// Downward load added to the support.
    pub fn pressing_force(&self, f: &ContactForce) -> f64 {
        match self.kind {
            ContactKind::Top => f.normal,
            ContactKind::Edge { .. } => 0.0,
        }
    }

    pub fn is_top(&self) -> bool {
        matches!(self.kind, ContactKind::Top)
    }
}

/// Force at one contact: tangential vector (body frame) and normal magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ContactForce {
    pub tangential: Vec2,
    pub normal: f64,
}

impl ContactForce {
    pub fn new(tangential: Vec2, normal: f64) -> Self {
        Self { tangential, normal }
    }

    /// `μ · normal − ‖tangential‖`.
    pub fn slack(&self, mu: f64) -> f64 {
        mu * self.normal - self.tangential.norm()
    }
}

/// Per-contact forces with their friction-cone slack.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ContactForceSet {
    pub forces: Vec<ContactForce>,
    pub slack: Vec<f64>,
}

impl ContactForceSet {
    pub fn new(forces: Vec<ContactForce>, mu: f64) -> Self {
        let slack = forces.iter().map(|f| f.slack(mu)).collect();
        Self { forces, slack }
    }

    pub fn zeros(n: usize) -> Self {
        Self { forces: vec![ContactForce::default(); n], slack: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.forces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forces.is_empty()
    }

    pub fn min_slack(&self) -> f64 {
        self.slack.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_normal(&self) -> f64 {
        self.forces.iter().map(|f| f.normal).fold(f64::INFINITY, f64::min)
    }
}

/// Which side face a single rear pusher acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    #[default]
    Rear,
    Left,
    Right,
    Front,
}

impl Face {
    /// Heading of the pushing direction relative to the body x-axis.
    pub fn angle(self) -> f64 {
        match self {
            Face::Rear => 0.0,
            Face::Left => -FRAC_PI_2,
            Face::Right => FRAC_PI_2,
            Face::Front => PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotSide {
    Left,
    Right,
}

/// Normal-load policy of the two-top-contact mode.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CopStrategy {
    /// Smallest Coulomb-feasible presses (floored at `min_press`).
    #[default]
    Balanced,
    /// Presses chosen to place the CoP at a body-frame point.
    Target { cop: Vec2 },
    /// The `about` arm presses with the full budget, pulling the CoP onto
    /// itself; the other arm lifts off the top face (zero press) and pushes
    /// on a side face at `push_point` along the inward `push_normal`.
    Pivot { about: PivotSide, push_point: Vec2, push_normal: Vec2 },
}

fn default_margin() -> f64 {
    0.1
}

/// Mode-specific geometry, tagged by the registry name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeGeometry {
    RearPushSingle {
        d: f64,
        #[serde(default)]
        face: Face,
        /// Lateral contact offset `y_c` (asymmetric push).
        #[serde(default)]
        offset: f64,
    },
    TopPressSingle {
        contact: Vec2,
        press_force: f64,
    },
    DualRearBicycle {
        d_x: f64,
        w: f64,
    },
    #[serde(rename = "dual_rear_diffdrive")]
    DualRearDiffDrive {
        d_x: f64,
        w: f64,
    },
    OrthogonalBimanual {
        d: f64,
    },
    DualTopPress {
        p_l: Vec2,
        p_r: Vec2,
        n_budget: f64,
        #[serde(default = "default_margin")]
        margin: f64,
        #[serde(default)]
        min_press: f64,
        #[serde(default)]
        strategy: CopStrategy,
    },
}

impl ModeGeometry {
    pub fn kind(&self) -> ModeKind {
        match self {
            ModeGeometry::RearPushSingle { .. } => ModeKind::RearPushSingle,
            ModeGeometry::TopPressSingle { .. } => ModeKind::TopPressSingle,
            ModeGeometry::DualRearBicycle { .. } => ModeKind::DualRearBicycle,
            ModeGeometry::DualRearDiffDrive { .. } => ModeKind::DualRearDiffDrive,
            ModeGeometry::OrthogonalBimanual { .. } => ModeKind::OrthogonalBimanual,
            ModeGeometry::DualTopPress { .. } => ModeKind::DualTopPress,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackingKind {
    Vfa,
    VirtualAxle,
    #[serde(rename = "com")]
    CoM,
    #[serde(rename = "cop")]
    CoP,
}

/// Body-fixed point a mode's controller regulates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingPoint {
    pub kind: TrackingKind,
    pub position: Vec2,
}

/// A contact topology with concrete placements.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactMode {
    geometry: ModeGeometry,
    contacts: Vec<ContactPlacement>,
}

fn require_point(name: &str, p: &Vec2) -> Result<()> {
    require_finite(name, p.x)?;
    require_finite(name, p.y)
}

impl ContactMode {
    /// Validates the geometry and places the contacts in the body frame.
    pub fn new(geometry: ModeGeometry) -> Result<Self> {
        let contacts = match geometry {
            ModeGeometry::RearPushSingle { d, face, offset } => {
                require_positive("d", d)?;
                require_finite("offset", offset)?;
                let frame = Pose2::new(0.0, 0.0, face.angle());
                vec![ContactPlacement::edge(frame.rotate(&Vec2::new(-d, offset)), frame.rotate(&Vec2::new(1.0, 0.0)))]
            }
            ModeGeometry::TopPressSingle { contact, press_force } => {
                require_point("contact", &contact)?;
                require_positive("press_force", press_force)?;
                vec![ContactPlacement::top(contact)]
            }
            ModeGeometry::DualRearBicycle { d_x, w } | ModeGeometry::DualRearDiffDrive { d_x, w } => {
                require_positive("d_x", d_x)?;
                require_positive("w", w)?;
                let n = Vec2::new(1.0, 0.0);
                vec![ContactPlacement::edge(Vec2::new(-d_x, w), n), ContactPlacement::edge(Vec2::new(-d_x, -w), n)]
            }
            ModeGeometry::OrthogonalBimanual { d } => {
                require_positive("d", d)?;
                vec![
                    ContactPlacement::edge(Vec2::new(-d, 0.0), Vec2::new(1.0, 0.0)),
                    ContactPlacement::edge(Vec2::new(0.0, d), Vec2::new(0.0, -1.0)),
                ]
            }
            ModeGeometry::DualTopPress { p_l, p_r, n_budget, margin, min_press, strategy } => {
                require_point("p_l", &p_l)?;
                require_point("p_r", &p_r)?;
                require_positive("n_budget", n_budget)?;
                if !(0.0..1.0).contains(&margin) {
                    return Err(Error::InvalidParameter(format!("margin in [0, 1) (got {margin})")));
                }
                if !(min_press.is_finite() && min_press >= 0.0) {
                    return Err(Error::InvalidParameter(format!("min_press >= 0 (got {min_press})")));
                }
                if (p_l - p_r).norm() == 0.0 {
                    return Err(Error::InvalidParameter("p_l != p_r".into()));
                }
                match strategy {
                    CopStrategy::Pivot { about, push_point, push_normal } => {
                        require_point("push_point", &push_point)?;
                        if !(push_normal.norm() > 0.0) {
                            return Err(Error::InvalidParameter("push_normal must be non-zero".into()));
                        }
                        let push = ContactPlacement::edge(push_point, push_normal);
                        match about {
                            PivotSide::Left => vec![ContactPlacement::top(p_l), push],
                            PivotSide::Right => vec![push, ContactPlacement::top(p_r)],
                        }
                    }
                    CopStrategy::Target { cop } => {
                        require_point("cop", &cop)?;
                        vec![ContactPlacement::top(p_l), ContactPlacement::top(p_r)]
                    }
                    CopStrategy::Balanced => vec![ContactPlacement::top(p_l), ContactPlacement::top(p_r)],
                }
            }
        };
        Ok(Self { geometry, contacts })
    }

    pub fn kind(&self) -> ModeKind {
        self.geometry.kind()
    }

    pub fn geometry(&self) -> &ModeGeometry {
        &self.geometry
    }

    pub fn contacts(&self) -> &[ContactPlacement] {
        &self.contacts
    }

    /// Frame in which the mode's formulas are written, relative to the body
    /// frame. Only single rear pushes on a non-rear face rotate it.
    pub fn frame(&self) -> Pose2 {
        match self.geometry {
            ModeGeometry::RearPushSingle { face, .. } => Pose2::new(0.0, 0.0, face.angle()),
            _ => Pose2::IDENTITY,
        }
    }

    /// The mode's tracking point in the body frame.
    ///
    /// `n_obj` is the object weight (N) acting at the body origin.
    pub fn tracking_point(&self, c: f64, r0: f64, n_obj: f64) -> Result<TrackingPoint> {
        let weight = NormalContact::new(Vec2::zeros(), n_obj);
        match self.geometry {
            ModeGeometry::RearPushSingle { d, .. } => {
                let tp = super::vfa_rear_push(c, r0, d)?;
                Ok(TrackingPoint { kind: tp.kind, position: self.frame().rotate(&tp.position) })
            }
            ModeGeometry::DualRearBicycle { d_x, .. } => super::vfa_rear_push(c, r0, d_x),
            ModeGeometry::TopPressSingle { contact, press_force } => {
                let cop = compute_cop(&weight, &[NormalContact::new(contact, press_force)])?.cop;
                let lever = contact - cop;
                let d = lever.norm();
                let tp = super::virtual_axle_top(c, r0, d)?;
                Ok(TrackingPoint { kind: tp.kind, position: cop + lever / d * tp.position.x })
            }
            ModeGeometry::DualRearDiffDrive { .. } | ModeGeometry::OrthogonalBimanual { .. } => {
                Ok(TrackingPoint { kind: TrackingKind::CoM, position: Vec2::zeros() })
            }
            ModeGeometry::DualTopPress { p_l, p_r, n_budget, min_press, strategy, .. } => {
                let presses = match strategy {
                    CopStrategy::Pivot { about: PivotSide::Left, .. } => {
                        vec![NormalContact::new(p_l, n_budget)]
                    }
                    CopStrategy::Pivot { about: PivotSide::Right, .. } => {
                        vec![NormalContact::new(p_r, n_budget)]
                    }
                    CopStrategy::Target { cop } => return Ok(TrackingPoint { kind: TrackingKind::CoP, position: cop }),
                    CopStrategy::Balanced => {
                        vec![NormalContact::new(p_l, min_press), NormalContact::new(p_r, min_press)]
                    }
                };
                let cop = compute_cop(&weight, &presses)?.cop;
                Ok(TrackingPoint { kind: TrackingKind::CoP, position: cop })
            }
        }
    }
}
