use thiserror::Error;

/// Errors raised by the exact algebra, group, classification and oracle layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in Q(zeta_{conductor})")]
    DivisionByZero { conductor: u32 },

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },

    #[error("{divisor} does not divide {target}")]
    NotADivisor { divisor: u32, target: u32 },

    #[error("quaternion is not a unit: norm = {norm}")]
    NotUnit { norm: String },

    #[error("closure exceeded the cap of {cap} pairs")]
    CapExceeded { cap: usize },

    #[error("family constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("element is not a member of the group: {0}")]
    NotAMember(String),

    #[error("group does not act freely on S3; witness {witness}")]
    NotFreeAction { witness: String },

    #[error("no case of the classification matches: {0}")]
    NotElliptic(String),

    #[error("not a finite subgroup of S3 presented on one factor: {0}")]
    Unrecognized(String),

    #[error("matrix is not a rotation: {0}")]
    NotARotation(String),

    #[error("degenerate contact frame at {0}")]
    DegenerateFrame(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
