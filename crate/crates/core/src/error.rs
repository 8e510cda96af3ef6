use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate. All arithmetic on counts and
/// recursion values is checked; overflow is an error, never a wraparound.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("generators have gcd {gcd} > 1; the complement would be infinite")]
    NotCoprime { gcd: u64 },
    #[error("the root semigroup has no parent")]
    RootHasNoParent,
    #[error("gap set is not co-closed: {0} + {1} = {2} is a gap")]
    NotAGapSet(u64, u64, u64),
    #[error("max genus {requested} exceeds the 64-bit counter guarantee (limit {limit})")]
    GenusTooLarge { requested: u32, limit: u32 },
    #[error("brute-force census is capped at genus {cap}, requested {requested}")]
    CensusCapExceeded { requested: u32, cap: u32 },
    #[error("64-bit overflow in {context}")]
    Overflow { context: &'static str },
    #[error("genus {genus} out of range for a table with max genus {max_genus}")]
    GenusOutOfRange { genus: u32, max_genus: u32 },
    #[error("{what}: need {needed}, have {available}")]
    InsufficientRange {
        what: &'static str,
        needed: i64,
        available: i64,
    },
    #[error("signed table support violates h <= g + 1 at ({g}, {h})")]
    InvalidSupport { g: u32, h: u32 },
    #[error("t(0, 0) is not derivable from the recursion")]
    OriginAnomaly,
    #[error("exponential fit refused: {reason}")]
    FitRefused { reason: String },
    #[error("malformed table data: {0}")]
    MalformedTable(String),
}
