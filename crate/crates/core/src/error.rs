use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{value} is not a quadratic residue mod {p}")]
    NoRoot { value: u32, p: u32 },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: u64, size: u64 },
    #[error("matrix determinant is {det} mod {p}, expected 1")]
    NotUnimodular { det: u32, p: u32 },
    #[error("LPS generators need p = 1 mod 12, got p = {0}")]
    BadPrimeResidue(u32),
    #[error("vertex {vertex} is not valid for a space of {size} vertices")]
    InvalidVertex { vertex: u64, size: u64 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("generator set is not closed under inverses for this vertex space")]
    NotSymmetric,
    #[error("generator set does not act on this vertex space: {0}")]
    IncompatibleSpace(String),
    #[error(
        "graph with {n} vertices and {entries} adjacency entries exceeds the budget of {budget}"
    )]
    SizeOverflow { n: u64, entries: u64, budget: u64 },
    #[error("adjacency lists are not symmetric at vertex {0}")]
    AsymmetricAdjacency(usize),
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("matrix dimension {dim} does not match data length {len}")]
    DimensionMismatch { dim: usize, len: usize },
    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("graph is not connected ({0} components)")]
    NotConnected(usize),
    #[error("graph is not regular")]
    NotRegular,
    #[error("no eigenvalue within 1e-6 of the degree {0}")]
    MissingTrivialEigenvalue(f64),
    #[error("{count} eigenvalues sit at the degree {k}; the graph is disconnected")]
    DisconnectedSpectrum { count: usize, k: f64 },
    #[error("sample is empty")]
    EmptySample,
    #[error("need at least {need} eigenvalues, got {got}")]
    TooFewEigenvalues { got: usize, need: usize },
    #[error("all spacings are zero")]
    DegenerateSpacings,
    #[error("alpha must exceed 1, got {0}")]
    AlphaOutOfRange(f64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("moment computation exceeds the overflow guard: {0}")]
    GuardExceeded(String),
    #[error("no input records")]
    EmptyInput,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("malformed data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
