//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgError {
    #[error("entry {0} outside the allowed value range 1..={1}")]
    InvalidValue(i64, usize),
    #[error("slot {0} out of range for arity {1}")]
    SlotOutOfRange(usize, usize),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("sequence has complexity {0} > 2 and admits no brace expression")]
    NotComplexityTwo(usize),
    #[error("degree {0} outside the working window [{1}, {2}]")]
    WindowExceeded(i64, i64, i64),
    #[error("homology window needs differential blocks at degree {0}, outside stored range [{1}, {2}]")]
    WindowTooNarrow(i64, i64, i64),
    #[error("element is not a cycle: d(z) != 0 in degree {0}")]
    NotACycle(i64),
    #[error("twisting morphism equation fails on {witness} in degree {degree}")]
    NotATwistingMorphism { degree: i64, witness: String },
    #[error("input error at line {line}: {msg}")]
    SchemaError { line: usize, msg: String },
    #[error("axiom {axiom} violated at {witness}")]
    AxiomViolation { axiom: String, witness: String },
    #[error("torsion computation requires integer coefficients or a field, got Z/{0} with {0} composite")]
    NotAField(u64),
    #[error("homotopy requires a primitively generated tensor Hopf algebra with zero differential: {0}")]
    NotPrimitivelyGenerated(String),
    #[error("straightening is not confluent: words {0} and {1} reduce differently")]
    NonConfluentStraightening(String, String),
    #[error("no witness available: {0}")]
    NoWitness(String),
    #[error("label {0} not found in degree {1}")]
    UnknownLabel(String, i64),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, AlgError>;
