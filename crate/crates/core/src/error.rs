use alloc::string::String;

/// Failure modes shared by every engine in the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("illegal composition: inner series must have positive order")]
    IllegalComposition,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("no singular point: polynomial is a unit at the origin")]
    NoSingularPoint,
    #[error("unsupported field extension: roots of {0} are not cyclotomic over the current field")]
    UnsupportedExtension(String),
    #[error("truncation insufficient: {0}")]
    TruncationInsufficient(String),
    #[error("ideal does not have finite colength on the curve")]
    NotFiniteColength,
    #[error("module is not contained in the comparison module")]
    NotNested,
    #[error("empty ideal")]
    EmptyIdeal,
    #[error("parameter axis is not contained in the singular locus: {0}")]
    NotAFamilyOverY(String),
    #[error("fiber singularity is not isolated: {0}")]
    NonIsolatedFiber(String),
    #[error("hyperplane section does not have an isolated singularity: {0}")]
    NonIsolatedSection(String),
    #[error("point is not on the variety")]
    NotOnVariety,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
