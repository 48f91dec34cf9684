//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by model construction, estimation, and ingestion.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate node {0} in hyperedge")]
    DuplicateNode(u32),
    #[error("hyperedge size {size} outside [2, {k_max}]")]
    SizeOutOfRange { size: usize, k_max: u32 },
    #[error("node {node} out of range for universe with p={p}")]
    NodeOutOfRange { node: u32, p: u32 },
    #[error("universe too large: edge count overflows u64 (p={p}, K={k_max})")]
    UniverseTooLarge { p: u32, k_max: u32 },
    #[error("invalid universe: need 2 <= K <= p, got p={p}, K={k_max}")]
    InvalidUniverse { p: u32, k_max: u32 },
    #[error("snapshots belong to different universes")]
    UniverseMismatch,
    #[error("edge not in universe")]
    EdgeNotInUniverse,
    #[error("invalid transition rates: alpha={alpha}, beta={beta}")]
    InvalidRates { alpha: f64, beta: f64 },
    #[error("degenerate stationary law: alpha + beta = 0")]
    DegenerateStationary,
    #[error("rates must be strictly positive for the mixing bound")]
    NonPositiveRates,
    #[error("series too short: need at least {need} snapshots, have {have}")]
    SeriesTooShort { need: usize, have: usize },
    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    InvalidLevel(f64),
    #[error("permutation count must be at least 1, got {0}")]
    InvalidM(u32),
    #[error("zero degree at node {node} in similarity matrix {matrix}")]
    ZeroDegree { node: u32, matrix: u8 },
    #[error("eigendecomposition failed to converge")]
    EigenFailure,
    #[error("community {0} has no members")]
    EmptyCommunity(u32),
    #[error("membership length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("invalid membership: label {label} >= q={q}")]
    InvalidMembership { label: u32, q: u32 },
    #[error("invalid cluster count q={q} for p={p}")]
    InvalidQ { q: u32, p: u32 },
    #[error("missing block parameter for community multiset {0:?}")]
    MissingBlockParam(Vec<u32>),
    #[error("empty estimation window [{lo}, {hi}]")]
    EmptyWindow { lo: usize, hi: usize },
    #[error("series of length {n} too short for change-point scan with n0={n0}")]
    WindowTooSmall { n: usize, n0: usize },
    #[error("empty candidate range")]
    EmptyRange,
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("input file contains no records")]
    EmptyFile,
    #[error("clique expansion requires pairwise input, found edge of size {0}")]
    NonPairInput(usize),
    #[error("decomposition target {target} must be smaller than edge size {size}")]
    TargetTooLarge { target: usize, size: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
