use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix has non-integral entries")]
    NonIntegral,
    #[error("d^{degree}+1 ∘ d^{degree} is not zero")]
    NotAComplex { degree: i32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid simplicial complex: {0}")]
    InvalidComplex(String),
    #[error("filtration level {level} is not face-closed (missing face {face:?})")]
    FiltrationNotClosed { level: usize, face: Vec<usize> },
    #[error("filtration is not nested or does not exhaust the complex: {0}")]
    FiltrationNotNested(String),
    #[error("frontier condition fails: stratum {lower} meets the closure of stratum {upper} without lying in it")]
    FrontierViolation { lower: usize, upper: usize },
    #[error("cell {0:?} not found")]
    CellNotFound(Vec<usize>),
    #[error("subcomplex is not closed under faces (missing {0:?})")]
    SubcomplexNotClosed(Vec<usize>),
    #[error("cell set is not open (up-closed): {0:?} is missing")]
    NotOpen(Vec<usize>),
    #[error("domain is not the complement of a closed subcomplex")]
    NotOpenComplement,
    #[error("the regular part of the stratification is empty")]
    EmptyRegularPart,
    #[error("stratum at level {level} has codimension one")]
    CodimensionOne { level: usize },
    #[error("bilinear form is degenerate")]
    FormDegenerate,
    #[error("mezzoperversity strata do not match the non-Witt strata: {0}")]
    MezzoStrataMismatch(String),
    #[error("subspace is not Lagrangian: {0}")]
    NotLagrangian(String),
    #[error("W is not invariant under transport along the stratum ({0})")]
    MonodromyMismatch(String),
    #[error("not orientable: {0}")]
    NotOrientable(String),
    #[error("degree {0} out of range")]
    DegreeOutOfRange(i64),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("inconsistent collapse: {0}")]
    InconsistentCollapse(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("stratum {0} not found")]
    StratumNotFound(usize),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("bad input at `{pointer}`: {message}")]
    BadInput { pointer: String, message: String },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

pub type Result<T> = std::result::Result<T, Error>;
