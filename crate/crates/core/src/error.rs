use thiserror::Error;

/// Errors raised by the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is out of range: {1}")]
    InvalidModulus(u64, &'static str),

    #[error("{n} is prime, so the zero-divisor graph is empty")]
    PrimeModulus { n: u64 },

    #[error("{x} is not a vertex of the zero-divisor graph of Z_{n}")]
    NotAVertex { x: u64, n: u64 },

    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(usize),

    #[error("expected two distinct vertices, got {0} twice")]
    SameVertex(usize),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("partition is not equitable")]
    NotEquitable,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("eigendecomposition failed reconstruction check (error {0:e})")]
    Reconstruction(f64),

    #[error("vertex {0} is not a singleton cell of the partition")]
    NotSingleton(usize),

    #[error("support violates the ratio condition: {0}")]
    RatioCondition(String),

    #[error("graph is not bipartite; odd cycle {0:?}")]
    NotBipartite(Vec<u64>),

    #[error("series exponential tail bound not met: {0:e}")]
    SeriesTail(f64),

    #[error("polynomial is not monic of degree {0}")]
    NotMonic(usize),

    #[error("{0} vertices exceed the dense-matrix cap of {1}")]
    DenseCap(usize, usize),

    #[error("inconsistent exact/numeric data: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
