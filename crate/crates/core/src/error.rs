use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator index {index} (group has {count} generators)")]
    UnknownGenerator { index: i32, count: usize },

    #[error("element {element} does not belong to this {backend} group")]
    BackendMismatch { backend: &'static str, element: String },

    #[error("ball of radius {radius} exceeds the cap of {cap} elements")]
    BallCapExceeded { radius: usize, cap: usize },

    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    #[error("order oracle is undefined here: {0}")]
    OracleUndefined(String),

    #[error("order oracle defect: {0}")]
    OracleDefect(String),

    #[error("Magnus truncation degree {degree} is too small for a word of length {length}")]
    TruncationTooSmall { degree: usize, length: usize },

    #[error("Magnus coefficient overflow")]
    CoefficientOverflow,

    #[error("linear functional must be nonzero")]
    ZeroFunctional,

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("element {0} lies outside the ball")]
    OutsideBall(String),

    #[error("invalid dynamical system: {0}")]
    InvalidSystem(String),

    #[error("measure is not invariant under the map at point {0}")]
    NotInvariant(usize),

    #[error("matrix is not admissible: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not hyperbolic: {0}")]
    NotHyperbolic(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("subgroup is not convex at this scale: {0}")]
    NotConvex(String),

    #[error("no half-plane fits the sampled signs: {0}")]
    NoHalfPlane(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
