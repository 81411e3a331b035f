use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be positive")]
    RankZero,
    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),
    #[error("Cartan matrix is not of finite type")]
    NotFiniteType,
    #[error("root system is not irreducible")]
    NotIrreducible,
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("invalid simple-root order: {0}")]
    InvalidOrder(String),
    #[error("two chain indices share the lexicographic key {0}")]
    DuplicateKey(String),
    #[error("position {position} out of range for a chain of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("position set is not strictly increasing")]
    UnsortedPositions,
    #[error("subset {0} is not admissible")]
    NotAdmissible(String),
    #[error("color {0} is out of range")]
    InvalidColor(usize),
    #[error("size cap of {cap} exceeded")]
    SizeCapExceeded { cap: usize },
    #[error("Shi condition violated at step {step}: {detail}")]
    ShiViolation { step: usize, detail: String },
    #[error("the chain was not produced by the lexicographic construction")]
    NotLexChain,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
