use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("total normal force is zero")]
    ZeroNormalForce,

    #[error("pusher separating: normal force {fx} <= 0")]
    PusherSeparating { fx: f64 },

    #[error("contact at the centre of pressure: virtual axle undefined")]
    ContactAtCop,

    #[error("friction cone violated at contact {contact}: slack {slack:.3e} N")]
    ConeViolation { contact: usize, slack: f64 },

    #[error("negative normal at contact {contact}; increase f_bias to at least {min_bias:.6} N")]
    IncreaseBias { contact: usize, min_bias: f64 },

    #[error("torque infeasible for contact geometry: {0}")]
    InfeasibleTorque(String),

    #[error("normal force budget exceeded: required {required:.6} N, budget {budget:.6} N")]
    BudgetExceeded { required: f64, budget: f64 },

    #[error("slip boundary exceeded at contact {contact}: slack {slack:.3e} N")]
    SlipBoundaryExceeded { contact: usize, slack: f64 },

    #[error("contact {contact} lost: normal force {normal:.3e} N")]
    ContactLost { contact: usize, normal: f64 },

    #[error("insufficient rotation in log: {0}")]
    InsufficientRotation(String),

    #[error("goal unreachable: {0}")]
    Unreachable(String),

    #[error("no contact mode satisfies the task: {}", .0.join("; "))]
    NoFeasibleMode(Vec<String>),

    #[error("forces do not match mode: {0}")]
    ModeMismatch(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::ZeroNormalForce => "zero_normal_force",
            Error::PusherSeparating { .. } => "pusher_separating",
            Error::ContactAtCop => "contact_at_cop",
            Error::ConeViolation { .. } => "cone_violation",
            Error::IncreaseBias { .. } => "increase_bias",
            Error::InfeasibleTorque(_) => "infeasible_torque",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::SlipBoundaryExceeded { .. } => "slip_boundary_exceeded",
            Error::ContactLost { .. } => "contact_lost",
            Error::InsufficientRotation(_) => "insufficient_rotation",
            Error::Unreachable(_) => "unreachable",
            Error::NoFeasibleMode(_) => "no_feasible_mode",
            Error::ModeMismatch(_) => "mode_mismatch",
            Error::Schema { .. } => "schema",
            Error::Invariant(_) => "invariant",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Rejects non-finite or non-positive values, naming the invariant.
pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} > 0 (got {value})")))
    }
}

pub(crate) fn require_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite (got {value})")))
    }
}
