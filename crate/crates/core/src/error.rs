//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error enum.
///
/// Construction errors carry enough detail to name the offending element,
/// pair or triple, so refusals double as diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Table is not square, or an entry is out of range.
    #[error("malformed table: {0}")]
    MalformedTable(String),
    /// Monoid laws fail; the report pinpoints the first violation.
    #[error("not a monoid: {0}")]
    NotAMonoid(String),
    /// An element with no two-sided inverse.
    #[error("not a group: element {witness} has no inverse")]
    NotAGroup { witness: usize },
    /// A non-commuting pair.
    #[error("not abelian: {a}*{b} != {b}*{a}")]
    NotAbelian { a: usize, b: usize },
    /// Map length does not match its domain.
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    /// A map that fails the homomorphism laws.
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    /// Indexed relation does not fit the (H, N) shape.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Two relations or actions over different (H, N).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// Enumeration would exceed the configured cap.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// Action is not compatible with the given relation.
    #[error("action not compatible with relation: {0}")]
    NotCompatible(String),
    /// Action is not compatible with any admissible relation.
    #[error("invalid action: {0}")]
    InvalidAction(String),
    /// (E, phi) fails the compatibility conditions.
    #[error("incompatible pair: {0}")]
    IncompatiblePair(String),
    /// Table fails the factor-set conditions.
    #[error("not a factor set: {0}")]
    NotFactorSet(String),
    /// Twisted products need an abelian group kernel.
    #[error("kernel is not an abelian group: {0}")]
    KernelNotAbelianGroup(String),
    /// Section does not split, or the underlying diagram is not an extension.
    #[error("not a split extension: {0}")]
    NotSplitExtension(String),
    /// Diagram fails the kernel/cokernel conditions.
    #[error("not an extension: {0}")]
    NotExtension(String),
    /// Extension fails the coset-witness condition.
    #[error("not cosetal: no witness for fibre pair ({g}, {g_prime})")]
    NotCosetal { g: usize, g_prime: usize },
    /// The two compatible pairs are not ordered.
    #[error("pairs not comparable: {0}")]
    NotComparable(String),
    /// Map does not send the identity to the identity.
    #[error("unit not preserved: maps identity to {got}")]
    UnitNotPreserved { got: usize },
    /// Factor sets or classes from different contexts.
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    /// Extensions whose extracted invariants differ.
    #[error("invariants differ: {0}")]
    InvariantsDiffer(String),
    /// Named monoid not found in the catalog or on disk.
    #[error("unknown monoid: {0}")]
    UnknownMonoid(String),
    /// File or serialization failure.
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
