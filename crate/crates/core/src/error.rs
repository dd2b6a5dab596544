use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("denominator series has zero constant term")]
    ZeroConstantTerm,
    #[error("series expansion has a non-integral coefficient at {0:?}")]
    NonIntegral((u32, u32)),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("unsupported automorphism: {0}")]
    UnsupportedAutomorphism(String),
    #[error("not a diagram symmetry: {0}")]
    NotDiagramSymmetry(String),
    #[error("group too large: more than {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("zero root has no reflection")]
    ZeroRoot,
    #[error("element does not preserve the subspace")]
    NotInvariant,
    #[error("truncation {truncation} too small: need at least {required}")]
    TruncationTooSmall { truncation: u32, required: u32 },
    #[error("oracle guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("folding mismatch: {0}")]
    FoldingMismatch(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True for failures caused by resource caps rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::GroupTooLarge { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
