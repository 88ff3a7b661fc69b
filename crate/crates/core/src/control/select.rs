use serde::{Deserialize, Serialize};

use super::reference::{plan_reference, PlanOptions};
use crate::error::{Error, Result};
use crate::mechanics::{Pose2, Vec2};
use crate::modes::{ContactMode, CopStrategy, Face, ModeGeometry, ModeKind, TrackingPoint};
use crate::world::ObjectParams;

/// Capabilities a task needs and the resources it offers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub arms: u8,
    pub top_access: bool,
    #[serde(default)]
    pub lateral_translation: bool,
    /// Rotation in place or about a nearby pivot.
    #[serde(default)]
    pub tight_pivot: bool,
    pub start: Pose2,
    pub goal: Pose2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSelection {
    pub mode: ContactMode,
    pub tracking: TrackingPoint,
    pub path_length: f64,
}

/// Placement used when a mode is chosen without explicit geometry.
pub fn default_geometry(kind: ModeKind, object: &ObjectParams) -> ModeGeometry {
    let [length, width] = object.footprint;
    match kind {
        ModeKind::RearPushSingle => ModeGeometry::RearPushSingle { d: length / 2.0, face: Face::Rear, offset: 0.0 },
        ModeKind::TopPressSingle => {
            ModeGeometry::TopPressSingle { contact: Vec2::new(length / 3.0, 0.0), press_force: 2.0 * object.weight() }
        }
        ModeKind::DualRearBicycle => ModeGeometry::DualRearBicycle { d_x: length / 2.0, w: width / 4.0 },
        ModeKind::DualRearDiffDrive => ModeGeometry::DualRearDiffDrive { d_x: length / 2.0, w: width / 4.0 },
        ModeKind::OrthogonalBimanual => ModeGeometry::OrthogonalBimanual { d: length.min(width) / 2.0 },
        ModeKind::DualTopPress => ModeGeometry::DualTopPress {
            p_l: Vec2::new(0.0, width / 4.0),
            p_r: Vec2::new(0.0, -width / 4.0),
            n_budget: 10.0 * object.weight(),
            margin: 0.1,
            min_press: object.weight(),
            strategy: CopStrategy::Balanced,
        },
    }
}

/// Picks a contact mode for the task.
///
/// Modes lacking a required capability are dropped. When the task needs
/// lateral translation or a tight pivot and two arms are available,
/// quasi-holonomic modes rank first; otherwise fewer arms rank first. Ties go
/// to the shortest planned tracking-point path, then to registry order.
pub fn select_mode(task: &TaskSpec, object: &ObjectParams, library: &[ModeKind]) -> Result<ModeSelection> {
    if task.arms == 0 {
        return Err(Error::NoFeasibleMode(vec!["at least one arm is required".into()]));
    }
    let special = task.lateral_translation || task.tight_pivot;
    let mut failures = Vec::new();
    let mut candidates = Vec::new();
    for &kind in library {
        let t = kind.traits();
        let mut missing = Vec::new();
        if t.arms > task.arms {
            missing.push(format!("needs {} arms", t.arms));
        }
        if t.top_access && !task.top_access {
            missing.push("needs top access".to_string());
        }
        if task.lateral_translation && !t.lateral_translation {
            missing.push("cannot translate sideways".to_string());
        }
        if task.tight_pivot && !t.tight_pivot {
            missing.push("cannot pivot tightly".to_string());
        }
        if !missing.is_empty() {
            failures.push(format!("{kind}: {}", missing.join(", ")));
            continue;
        }
        let mode = ContactMode::new(default_geometry(kind, object))?;
        let opts = PlanOptions::default();
        match plan_reference(&task.start, &task.goal, &mode, object, &opts) {
            Ok(path) => {
                let tier = if special && task.arms >= 2 { u8::from(!t.quasi_holonomic) } else { t.arms };
                candidates.push((tier, path.length(), kind, mode));
            }
            Err(e) => failures.push(format!("{kind}: {e}")),
        }
    }
    if library.is_empty() {
        failures.push("mode library is empty".into());
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    let Some((_, path_length, _, mode)) = candidates.into_iter().next() else {
        return Err(Error::NoFeasibleMode(failures));
    };
    let tracking = mode.tracking_point(object.c, object.r0, object.weight())?;
    Ok(ModeSelection { mode, tracking, path_length })
}
