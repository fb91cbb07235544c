use thiserror::Error;

/// Errors raised by the model, the maps and the stability machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("enrolment {value} outside the domain [0, {upper}]")]
    OutOfDomain { value: f64, upper: f64 },

    #[error("follower share {0} outside [0, 1]")]
    ShareOutOfRange(f64),

    #[error("both preference weights of the {0} type vanish; the education share is undefined")]
    DegenerateWeights(&'static str),

    #[error("enrolment {e} is within {tol:e} of the premium kink at {kink}")]
    KinkProximity { e: f64, kink: f64, tol: f64 },

    #[error("{agent} education share {share} is at the boundary of (0, 1)")]
    ShareAtBoundary { agent: &'static str, share: f64 },

    #[error("compact and expanded utility slopes disagree: {compact} vs {expanded}")]
    FormMismatch { compact: f64, expanded: f64 },

    #[error("fixed point is not locally stable (|slope| = {0})")]
    NotStable(f64),

    #[error("fixed point lies in the saturated-premium regime")]
    SaturatedRegime,

    #[error("enrolment response to kappa has the wrong sign ({0})")]
    SignViolation(f64),

    #[error("the map is not certified unimodal: {0}")]
    UnimodalityNotCertified(String),

    #[error("state is not a fixed point (residual {0:e})")]
    NotAFixedPoint(f64),

    #[error("|slope of the enrolment map| = {0} is not below one")]
    GStarNotBelowOne(f64),

    #[error("utility slope gap is zero; the switching threshold is unbounded")]
    HStarZero,

    #[error("{0}")]
    InvalidArgument(String),
}

impl ModelError {
    /// Short machine-friendly tag for output files.
    pub fn kind(&self) -> &'static str {
        match self {
            ModelError::InvalidParameter { .. } => "invalid_parameter",
            ModelError::OutOfDomain { .. } => "out_of_domain",
            ModelError::ShareOutOfRange(_) => "share_out_of_range",
            ModelError::DegenerateWeights(_) => "degenerate_weights",
            ModelError::KinkProximity { .. } => "kink_proximity",
            ModelError::ShareAtBoundary { .. } => "share_at_boundary",
            ModelError::FormMismatch { .. } => "form_mismatch",
            ModelError::NotStable(_) => "not_stable",
            ModelError::SaturatedRegime => "saturated_regime",
            ModelError::SignViolation(_) => "sign_violation",
            ModelError::UnimodalityNotCertified(_) => "unimodality_not_certified",
            ModelError::NotAFixedPoint(_) => "not_a_fixed_point",
            ModelError::GStarNotBelowOne(_) => "g_star_not_below_one",
            ModelError::HStarZero => "h_star_zero",
            ModelError::InvalidArgument(_) => "invalid_argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;
