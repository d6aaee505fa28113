use thiserror::Error;

use crate::scalar::FieldSpec;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{line}:{column}: {message}")]
    ParseAt {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation is not homogeneous: {0}")]
    InhomogeneousRelation(String),
    #[error("relation of degree {degree} exceeds truncation degree {bound}")]
    RelationTooLong { degree: usize, bound: usize },
    #[error("zero relation")]
    ZeroRelation,
    #[error("the zero element has no degree")]
    ZeroElement,
    #[error("degree {degree} outside truncation 0..={bound}")]
    DegreeOutOfRange { degree: usize, bound: usize },
    #[error("operands belong to different algebras")]
    HostMismatch,
    #[error("product escapes truncation degree {0}")]
    Overflow(usize),
    #[error("algebra has no identity element")]
    NotUnital,
    #[error("index {index} outside basis of size {len}")]
    InvalidIndex { index: usize, len: usize },
    #[error("element is not invertible within the truncation: {0}")]
    NotInvertible(String),
    #[error("input elements are linearly dependent")]
    DependentInput,
    #[error("schedule must be strictly increasing")]
    ScheduleNotIncreasing,
    #[error("schedule step {0} adds no new basis vectors")]
    EmptyScheduleStep(usize),
    #[error("matrix has support outside row {0}")]
    SupportOutsideRow(usize),
    #[error("duplicate entry: {0}")]
    Duplicate(String),
    #[error("not enough exact points: need {need}, have {have}")]
    TooFewPoints { need: usize, have: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
