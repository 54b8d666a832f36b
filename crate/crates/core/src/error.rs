use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("t-exponent {0} is not a multiple of 3")]
    NonDivisibleExponent(i32),

    #[error("series constant term is not 1")]
    NonUnitConstantTerm,

    #[error("monomial {0} is not invertible")]
    NotInvertible(String),

    #[error("invalid box dimensions: {0}")]
    InvalidDims(String),

    #[error("box dimensions {0} are not all even")]
    OddDims(String),

    #[error("face {0} is not an edge of the mesh")]
    UnknownFace(String),

    #[error("not a perfect matching: {0}")]
    NotAMatching(String),

    #[error("hexagonal face {0} is not flippable in this matching")]
    FaceNotFlippable(usize),

    #[error("objects belong to different meshes")]
    MeshMismatch,

    #[error("{what}: {count} exceeds the limit {limit}")]
    TooLarge { what: String, count: u128, limit: u128 },

    #[error("edge weighting has no weight for edge {0}")]
    MissingEdgeWeight(String),

    #[error("no sign rule candidate passes calibration")]
    NoValidRule,

    #[error("degree {degree} exceeds the stable range {max}")]
    DegreeTooLarge { degree: u32, max: u32 },

    #[error("propeller structure not found: {0}")]
    NoPropellers(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
