use thiserror::Error;

/// Errors raised by the library. Variants map one-to-one onto the failure
/// classes the CLI turns into exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("malformed data: {0}")]
    Structural(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("exact dims required: {0}")]
    ExactDimsRequired(String),

    #[error("fusion channel {a} ⊗ {b} → {c} is not present")]
    ChannelAbsent { a: String, b: String, c: String },

    #[error("data inconsistency: {0}")]
    DataInconsistency(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid subcategory: {0}")]
    InvalidSubcategory(String),

    #[error("group mismatch: {reason}{}", .triple.as_ref().map(|(a, b, c)| format!(" (first failing triple {a}, {b}, {c})")).unwrap_or_default())]
    GroupMismatch {
        reason: String,
        triple: Option<(String, String, String)>,
    },

    #[error("subcategory needs a user-supplied group: {0}")]
    NeedsGroup(String),

    #[error("label `{label}` is not degenerate: channel {label} ⊗ {partner} → {channel} has monodromy {phase}")]
    DegeneracyViolation {
        label: String,
        partner: String,
        channel: String,
        phase: String,
    },

    #[error("stabilizer cocycle cannot be inferred for {}; candidate classes: {}", .orbits.join(", "), .candidates)]
    NeedsCocycle { orbits: Vec<String>, candidates: String },

    #[error("ambiguous reconstruction: {what} has {count} solutions")]
    Ambiguous { what: String, count: usize },

    #[error("no consistent solution: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
