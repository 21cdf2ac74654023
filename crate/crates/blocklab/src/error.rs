use thiserror::Error;

/// Errors produced by the algebra workbench.
///
/// Two families matter to callers: bad input data (rejected constructions,
/// unsatisfied preconditions) and internal consistency failures that signal a
/// bug in the tool itself rather than in the input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    DegreeOutOfRange,

    #[error("field order {0} exceeds the supported bound 2^20")]
    FieldTooLarge(u64),

    #[error("{p} and {m} are not coprime")]
    NotCoprime { p: u64, m: u64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("structure constants are not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },

    #[error("unit law fails at basis element {0}")]
    UnitLawViolated(usize),

    #[error("bilinear form is not symmetric")]
    FormNotSymmetric,

    #[error("bilinear form is degenerate (rank {rank} < dim {dim})")]
    FormDegenerate { rank: usize, dim: usize },

    #[error("bilinear form is not associative at basis triple ({i}, {j}, {k})")]
    FormNotAssociative { i: usize, j: usize, k: usize },

    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,

    #[error("element is not idempotent")]
    NotIdempotent,

    #[error("element is not idempotent modulo the radical")]
    NotIdempotentModRadical,

    #[error("Cayley table is not a Latin square ({0})")]
    NotLatinSquare(String),

    #[error("Cayley table is not associative at ({i}, {j}, {k})")]
    TableNotAssociative { i: usize, j: usize, k: usize },

    #[error("index 0 is not a two-sided identity")]
    NoIdentity,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group closure exceeds the order cap {0}")]
    ClosureExceedsCap(usize),

    #[error("idempotent splitting stagnated; the algebra does not appear to be split")]
    SplittingStagnation,

    #[error("semisimple quotient is not split over the working field ({0})")]
    NotSplit(String),

    #[error("unknown group name: {0}")]
    UnknownGroup(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error on {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    /// A validated mathematical invariant failed; this signals a defect in the
    /// tool, never in the input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate bad user input rather than a tool bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::SplittingStagnation)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
