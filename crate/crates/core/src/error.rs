//! Error type shared across the workbench.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A polynomial square root was requested of a non-square.
    #[error("not a square: {0}")]
    NotASquare(String),

    /// A Witt vector failed the order-4 input normal form.
    #[error("invalid Witt input: {0}")]
    InvalidWittInput(String),

    /// Order-4 branch data requires the first component to have a pole at 0.
    #[error("not totally ramified: first component has no pole at x = 0")]
    NotTotallyRamified,

    /// Reduction only handles poles at x = 0 (and rejects poles at infinity).
    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),

    /// A constant term with nonzero trace cannot be killed inside F_{2^d};
    /// it would need a ground-field extension.
    #[error("reduction obstruction: {0}")]
    ReductionObstruction(String),

    /// Requested residue extension degree is outside the supported tower.
    #[error("unsupported degree: d = {0} (supported: 1..=12)")]
    UnsupportedDegree(u32),

    /// A zero-vs-nonzero decision was needed on a value that is zero to
    /// the working precision.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// The residue map was applied to a value of nonzero valuation.
    #[error("value is not a unit: valuation {0}")]
    ValueNotUnit(String),

    /// The Kummer datum is a square, so the character is trivial.
    #[error("trivial character: {0}")]
    TrivialCharacter(String),

    /// The supplied correcting element does not certify the maximum;
    /// the residue is still a square.
    #[error("hint does not certify: residue {0} is a square")]
    HintNotCertifying(String),

    /// A symbolic identity check failed; carries the residual.
    #[error("identity failure: residual {0}")]
    IdentityFailure(String),

    /// A parameter violates its constraints (e.g. a branch parameter of
    /// non-positive valuation).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The ghost oracle derived different structure constants than the
    /// ones compiled into the Witt arithmetic.
    #[error("oracle mismatch: {0}")]
    MismatchError(String),

    /// The greedy search would need a valuation outside the value group.
    #[error("value group obstruction: needed valuation {0} is not in (1/4)Z")]
    ValueGroupObstruction(String),

    /// The greedy search exceeded its iteration guard.
    #[error("non-termination guard hit after {0} iterations")]
    NonTermination(usize),

    /// A series computation ran out of truncation room.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// Roots that were claimed distinct collide (or a squarefreeness claim
    /// fails) at the working precision.
    #[error("non-separable: {0}")]
    NonSeparable(String),

    /// Malformed textual input (rational functions, ring expressions,
    /// configuration fields).
    #[error("parse error: {0}")]
    Parse(String),
}
