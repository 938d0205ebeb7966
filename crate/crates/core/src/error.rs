use thiserror::Error;

/// Every failure the kernel can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unramified modulus is not irreducible modulo {p}")]
    NotIrreducible { p: u64 },
    #[error("modulus is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("ring too large: e*f = {size} exceeds bound {bound}")]
    RingTooLarge { size: usize, bound: usize },
    #[error("ring specs differ")]
    SpecMismatch,
    #[error("element is not a unit")]
    NotUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("cannot raise precision from {have} to {want}")]
    PrecisionIncrease { have: u32, want: u32 },
    #[error("residue is zero")]
    ZeroResidue,
    #[error("exponent known to {have} p-adic digits, {need} required")]
    InsufficientExponentPrecision { need: u32, have: u32 },
    #[error("truncation too small: need T-length {need}, have {have}")]
    TruncationTooSmall { need: usize, have: usize },
    #[error("lambda invariant not visible below truncation {tdeg}")]
    LambdaOverflow { tdeg: usize },
    #[error("evaluation point is not in the maximal ideal")]
    NotInMaximalIdeal,
    #[error("no root of unity of order {order} in the coefficient ring")]
    RootNotAvailable { order: u64 },
    #[error("group order is not invertible in the coefficient ring")]
    OrderNotInvertible,
    #[error("element {0:?} is not in the group")]
    ElementOutOfGroup(Vec<u64>),
    #[error("domain or codomain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid group morphism: {0}")]
    InvalidMorphism(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("module is not torsion")]
    NonTorsion,
    #[error("node {0} missing from family")]
    NodeMissing(String),
    #[error("Euler factor not invertible on edge {0}")]
    FactorNotInvertible(String),
    #[error("trivial character at the trivial modulus")]
    TrivialCharacterAtTrivialModulus,
    #[error("missing Frobenius datum for {0}")]
    MissingFrobeniusDatum(String),
    #[error("Euler compatibility fails on edge {edge}: {detail}")]
    Incompatible { edge: String, detail: String },
    #[error("schema violation at {0}")]
    SchemaViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
