use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::contact::TrackingKind;
use crate::error::Error;

/// The contact topologies, addressable by their scenario-file names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeKind {
    RearPushSingle,
    TopPressSingle,
    DualRearBicycle,
    #[serde(rename = "dual_rear_diffdrive")]
    DualRearDiffDrive,
    OrthogonalBimanual,
    DualTopPress,
}

/// Static properties of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModeTraits {
    pub arms: u8,
    pub top_access: bool,
    pub reduced_order_model: &'static str,
    pub tracking: TrackingKind,
    pub cop_steering: bool,
    pub quasi_holonomic: bool,
    /// Can translate the object sideways without turning.
    pub lateral_translation: bool,
    /// Can spin about a point on or near the object.
    pub tight_pivot: bool,
}

impl ModeKind {
    pub const ALL: [ModeKind; 6] = [
        ModeKind::RearPushSingle,
        ModeKind::TopPressSingle,
        ModeKind::DualRearBicycle,
        ModeKind::DualRearDiffDrive,
        ModeKind::OrthogonalBimanual,
        ModeKind::DualTopPress,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModeKind::RearPushSingle => "rear_push_single",
            ModeKind::TopPressSingle => "top_press_single",
            ModeKind::DualRearBicycle => "dual_rear_bicycle",
            ModeKind::DualRearDiffDrive => "dual_rear_diffdrive",
            ModeKind::OrthogonalBimanual => "orthogonal_bimanual",
            ModeKind::DualTopPress => "dual_top_press",
        }
    }

    pub fn traits(self) -> ModeTraits {
        use ModeKind::*;
        match self {
            RearPushSingle => ModeTraits {
                arms: 1,
                top_access: false,
                reduced_order_model: "Dubins bicycle (rear-wheel steering)",
                tracking: TrackingKind::Vfa,
                cop_steering: false,
                quasi_holonomic: false,
                lateral_translation: false,
                tight_pivot: false,
            },
            TopPressSingle => ModeTraits {
                arms: 1,
                top_access: true,
                reduced_order_model: "unicycle",
                tracking: TrackingKind::VirtualAxle,
                cop_steering: true,
                quasi_holonomic: false,
                lateral_translation: false,
                tight_pivot: true,
            },
            DualRearBicycle => ModeTraits {
                arms: 2,
                top_access: false,
                reduced_order_model: "Dubins bicycle (equivalent bicycle)",
                tracking: TrackingKind::Vfa,
                cop_steering: false,
                quasi_holonomic: false,
                lateral_translation: false,
                tight_pivot: false,
            },
            DualRearDiffDrive => ModeTraits {
                arms: 2,
                top_access: false,
                reduced_order_model: "differential drive",
                tracking: TrackingKind::CoM,
                cop_steering: false,
                quasi_holonomic: false,
                lateral_translation: false,
                tight_pivot: false,
            },
            OrthogonalBimanual => ModeTraits {
                arms: 2,
                top_access: false,
                reduced_order_model: "quasi-holonomic",
                tracking: TrackingKind::CoM,
                cop_steering: false,
                quasi_holonomic: true,
                lateral_translation: false,
                tight_pivot: true,
            },
            DualTopPress => ModeTraits {
                arms: 2,
                top_access: true,
                reduced_order_model: "quasi-holonomic",
                tracking: TrackingKind::CoP,
                cop_steering: true,
                quasi_holonomic: true,
                lateral_translation: true,
                tight_pivot: true,
            },
        }
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        ModeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown mode '{s}'")))
    }
}
