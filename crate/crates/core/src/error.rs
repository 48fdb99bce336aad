use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("map is not contractive (spectral norm {norm})")]
    NotContractive { norm: f64 },

    #[error("map escapes the space: vertex {vertex:?} maps to {image:?}")]
    EscapesSpace { vertex: Vec<f64>, image: Vec<f64> },

    #[error("point {0:?} lies outside the space")]
    PointOutsideSpace(Vec<f64>),

    #[error("maps are defined on different spaces")]
    SpaceMismatch,

    #[error("sequences are defined over different alphabets")]
    AlphabetMismatch,

    #[error("duplicate symbol name `{0}`")]
    DuplicateName(String),

    #[error("symbols `{0}` and `{1}` name the same map")]
    DuplicateMap(String, String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("no {kind} named `{name}`")]
    UnknownEntity { kind: &'static str, name: String },

    #[error("empty period")]
    EmptyPeriod,

    #[error("empty system")]
    EmptySystem,

    #[error("generator needs at least two distinct symbols")]
    GeneratorTooSmall,

    #[error("generated sequences have no eventually periodic normal form")]
    NotNormalizable,

    #[error("time {0} lies outside the operator's time domain")]
    TimeOutsideDomain(String),

    #[error("scaling requires the space to contain the origin")]
    OriginNotInSpace,

    #[error("invalid ratio {0}: must lie in (0, 1)")]
    InvalidRatio(f64),

    #[error("invalid tolerance {0}: must lie in (0, 1)")]
    InvalidTolerance(f64),

    #[error("map `{0}` is not a similarity")]
    NotSimilarity(String),

    #[error("raster resolution mismatch")]
    ResolutionMismatch,

    #[error("raster has no occupied cells")]
    EmptyRaster,

    #[error("unsupported raster: {0}")]
    UnsupportedRaster(String),

    #[error("open set is not contained in the space")]
    OpenSetOutsideSpace,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("prerequisite failed: {0}")]
    PrerequisiteFailed(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error in `{entity}`: {source}")]
    Validation {
        entity: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
