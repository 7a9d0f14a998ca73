use thiserror::Error;

/// Errors reported by the workbench modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex count must be at least {min}, got {got}")]
    VertexCountTooSmall { min: u32, got: u32 },
    #[error("graph has {got} vertices; exhaustive enumeration is limited to {max}")]
    GraphTooLarge { got: u32, max: u32 },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid measurement family: {0}")]
    InvalidFamily(String),
    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(u32),
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("pairwise inner product target must be negative, got {0}")]
    PairwiseNotNegative(f64),
    #[error("cannot normalize a zero vector")]
    ZeroNorm,
    #[error("state is not normalized: norm = {0}")]
    NotNormalized(f64),
    #[error("graph has {graph_n} vertices but family has {family_n}")]
    GraphFamilyMismatch { graph_n: u32, family_n: u32 },
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,
    #[error("root finding failed: residual {residual:e} exceeds bound {bound:e}")]
    RootResidual { residual: f64, bound: f64 },
    #[error("invalid constellation: {0}")]
    InvalidConstellation(String),
    #[error("restart count must be at least 1")]
    NoRestarts,
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("noise amplitude must be nonnegative, got {0}")]
    NegativeNoise(f64),
    #[error("violation delta must be nonnegative, got {0}")]
    NegativeDelta(f64),
    #[error("malformed {what} JSON: {detail}")]
    MalformedJson { what: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
