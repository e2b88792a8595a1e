//! Error type shared by every module in the crate.

/// Everything that can go wrong across the toolkit.
///
/// The variants are deliberately coarse: callers (and the CLI's exit-code
/// mapping) care about the *class* of failure — bad input versus a violated
/// internal invariant — more than about which helper raised it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An index was out of range or an index pair collided (e.g. i = j for an
    /// elementary matrix).
    #[error("invalid index: {0}")]
    InvalidIndex(String),

    /// Two operands had incompatible dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation required determinant ±1 and did not get it.
    #[error("not unimodular: {0}")]
    NotUnimodular(String),

    /// A residue modulus was smaller than 2.
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    /// Text input (matrix JSON, word grammar, token alphabet) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A matrix failed a subgroup membership requirement.
    #[error("not a member: {0}")]
    NotMember(String),

    /// A documented precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested parameter combination has no supported construction.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two values that had to agree (dimension, level, ...) did not.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// An enumeration grew past the configured element budget.
    #[error("element budget exceeded ({0} elements)")]
    BudgetExceeded(usize),

    /// A group-table operation required an abelian group.
    #[error("non-abelian input: {0}")]
    NonAbelian(String),

    /// An internal invariant that should be unreachable was violated.
    /// Seeing this means a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}
