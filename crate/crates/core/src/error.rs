use thiserror::Error;

/// Errors raised by the algebra, module and classification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different atom sets or fields")]
    ContextMismatch,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid atom set: {0}")]
    InvalidAtomSet(String),

    #[error("unknown atom label `{0}`")]
    UnknownAtom(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid scalar `{text}`: {reason}")]
    InvalidScalar { text: String, reason: String },

    #[error("invalid partition of unity: {0}")]
    InvalidPartition(String),

    #[error("the family is not a minorant: residual {{{}}} dominates no member", .residual.join(","))]
    NotMinorant { residual: Vec<String> },

    #[error("the idempotent must be nonzero")]
    ZeroIdempotent,

    #[error("the module is not faithful: no generator lives on {{{}}}", .dead_atoms.join(","))]
    NotFaithful { dead_atoms: Vec<String> },

    #[error(
        "rank is not constant on the piece: atom `{atom}` has rank {found}, expected {expected}"
    )]
    RankMismatch {
        atom: String,
        expected: usize,
        found: usize,
    },

    #[error("the modules have different passports")]
    PassportMismatch,

    #[error("the vector does not belong to the source module (fails at atom `{atom}`)")]
    NotInDomain { atom: String },

    #[error("ambient dimension must be at least 1")]
    EmptyAmbient,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
