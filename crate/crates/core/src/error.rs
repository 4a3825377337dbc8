use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix rows are linearly dependent over Q (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambient rank {0} exceeds the supported maximum of 4")]
    DimensionTooLarge(usize),

    #[error("origin is not in the interior of the polytope")]
    OriginNotInterior,

    #[error("not reflexive: {0}")]
    NotReflexive(String),

    #[error("cone {cone:?} is not smooth (|det| = {det})")]
    NotSmooth { cone: Vec<usize>, det: String },

    #[error("fan is not complete: {0}")]
    NotComplete(String),

    #[error("ray {ray} ({coords:?}) is not primitive")]
    RayNotPrimitive { ray: usize, coords: Vec<i64> },

    #[error("nef-partition block {block} has negative degree {degree} on primitive relation {collection:?}")]
    NotNef {
        block: usize,
        collection: Vec<usize>,
        degree: String,
    },

    #[error("cone has empty interior: {0}")]
    EmptyInterior(String),

    #[error("vector {0:?} is not in the kernel of A_ext")]
    NotInKernel(Vec<String>),

    #[error("indicial zero locus is not a single point: {0}")]
    UnexpectedLocus(String),

    #[error("lattice vector {0:?} has a negative entry at a non-(i,0) position")]
    NotInRegion(Vec<i64>),

    #[error("expansion needs {needed} terms, cap is {cap}")]
    TruncationTooLarge { needed: usize, cap: usize },

    #[error("weight is not ample: {0}")]
    WeightNotAmple(String),

    #[error("lattice vector {0:?} lies in the Mori cone")]
    InMoriCone(Vec<i64>),

    #[error("degenerate simplex {0:?}")]
    DegenerateSimplex(Vec<usize>),

    #[error("simplex {simplex:?} is not unimodular (|det| = {det})")]
    NotUnimodular { simplex: Vec<usize>, det: String },

    #[error("triangulation is not regular: {0}")]
    NotRegular(String),

    #[error("Buchberger iteration cap {0} reached")]
    NonTermination(usize),

    #[error("unimodular subdivision failed: {0}")]
    SubdivisionFailed(String),

    #[error("lattice vector {l:?} has chart exponents {m:?}, not all non-negative integers")]
    NegativeExponent { l: Vec<i64>, m: Vec<String> },

    #[error("certificate clause '{clause}' failed: {detail}")]
    CertificateFailed { clause: String, detail: String },

    #[error("enumeration exceeded {0} terms (raise GKZFRAC_MAX_TERMS)")]
    TooManyTerms(usize),

    #[error("polyhedron is unbounded in the enumeration direction")]
    Unbounded,

    #[error("parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("semantic error at {pointer}: {message}")]
    Semantic { pointer: String, message: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
