use thiserror::Error;

use crate::flavor::Flavor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("{n_external} external vertices requested but only {n_vertices} vertices")]
    ExternalCount { n_external: usize, n_vertices: usize },
    #[error("graphs with {0} vertices exceed the supported size")]
    TooLarge(usize),
    #[error("cannot parse graph key: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("legs are only allowed in the legged flavor, not {0}")]
    LegsNotAllowed(Flavor),
    #[error("{0} is an operad flavor; use the operad enumerator")]
    OperadFlavor(Flavor),
    #[error("{0} is not an operad flavor")]
    NotOperad(Flavor),
    #[error("operad slices need at least one external vertex")]
    NoExternals,
    #[error("bucket V={v} E={e} L={l} exceeds the configured bounds (V <= {max_v}, E <= {max_e}, L <= {max_l})")]
    OutOfBounds { v: usize, e: usize, l: usize, max_v: usize, max_e: usize, max_l: usize },
    #[error("bucket needs at least one vertex")]
    EmptyBucket,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt cache entry {path}: {reason}")]
    Corrupt { path: String, reason: String },
    #[error(transparent)]
    Basis(#[from] BasisError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalcError {
    #[error("cochains live in different complexes: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("cochain is not homogeneous in degree")]
    Inhomogeneous,
    #[error("unknown named cochain {0:?}")]
    UnknownName(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("operation not defined for flavor {0}")]
    WrongFlavor(Flavor),
    #[error("composition slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("the acting graph must be connected")]
    Disconnected,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("differential of column {col} hits {key}, which is not in the target slice")]
    MissingTarget { col: usize, key: String },
    #[error("buckets are not adjacent: ({0},{1}) -> ({2},{3})")]
    BucketMismatch(usize, usize, usize, usize),
    #[error("(b, d) cohomology is only defined for connected graph complexes, not {0}")]
    Unsupported(Flavor),
    #[error("no bucket has betti {b} and degree {d} for n = {n}")]
    NoBucket { b: i64, d: i64, n: i64 },
    #[error("fields disagree: {0}")]
    FieldDisagreement(String),
    #[error("coefficient too large for the matrix format: {0}")]
    Overflow(String),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

#[derive(Debug, Error)]
pub enum McError {
    #[error("residual is nonzero at V={0} below the current truncation")]
    Inconsistent(usize),
    #[error("residual at V={0} is not a cocycle")]
    NotCocycle(usize),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Mc(#[from] McError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Report(#[from] crate::report::ReportError),
}
