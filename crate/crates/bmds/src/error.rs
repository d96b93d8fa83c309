//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two ring elements (or bit vectors) of different lengths were combined.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Parameter validation failed; every violation is listed.
    #[error("invalid parameters: {}", violations.join("; "))]
    InvalidParams { violations: Vec<String> },

    #[error("{0} is not prime")]
    NotPrime(usize),

    /// `1 + x^b` has no e(x)-inverse because gcd(b, p) != 1.
    #[error("1 + x^{b} is not invertible: gcd({b}, {p}) != 1")]
    NotInvertible { b: usize, p: usize },

    /// The element does not lie in the ideal generated by `1 + x^tau`.
    #[error("element is not in the ideal C_(p*tau)")]
    NotInIdeal,

    /// Fewer than `k` columns are available.
    #[error("unrecoverable: {present} columns present, {needed} required")]
    Unrecoverable { present: usize, needed: usize },

    /// The erasure pattern leads to a system whose determinant shares a
    /// factor with the check polynomial; the code is not MDS for it.
    #[error("erasure pattern {columns:?} is not decodable for these parameters")]
    SingularPattern { columns: Vec<usize> },

    /// Present columns do not form a consistent codeword.
    #[error("inconsistent codeword: check equations do not balance")]
    InconsistentCodeword,

    /// The repair algorithm does not cover this column.
    #[error("repair algorithm does not cover column {column}")]
    UnsupportedRepair { column: usize },

    #[error("helper column {column} is missing")]
    MissingHelper { column: usize },

    /// A repair plan was applied to a column set it was not built for.
    #[error("plan mismatch: {0}")]
    PlanMismatch(String),

    /// A repair plan's bandwidth violated the (d+1)/d weak-optimality bound.
    #[error("bandwidth bound violated for column {failed}: {bandwidth} * {d} >= {limit}")]
    BandwidthBound {
        failed: usize,
        bandwidth: usize,
        d: usize,
        limit: usize,
    },

    /// Determinant expansion is only supported up to 7x7.
    #[error("sub-matrix of size {0} exceeds the supported determinant size")]
    DeterminantTooLarge(usize),

    /// Column bytes carry set bits past the declared bit length.
    #[error("column payload has set bits past bit {len}")]
    TrailingBits { len: usize },
}
