//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by constructors and user-facing entry points.
///
/// Algebraic kernels (`BitMatrix` products, Pauli sums, map application) treat
/// dimension mismatches as programmer errors and panic instead; everything
/// that can be triggered by bad input data goes through this enum.
#[derive(Debug, Error)]
pub enum Error {
    #[error("side length {n} is not supported: {reason}")]
    InvalidSideLength { n: usize, reason: &'static str },

    #[error("qubit index {index} out of range for {total} qubits")]
    QubitOutOfRange { index: usize, total: usize },

    #[error("cannot parse Pauli string: {0}")]
    PauliParse(String),

    #[error("cannot parse gate program: {0}")]
    GateParse(String),

    #[error("gate slot q{slot} out of range (gate acts on {total} slots)")]
    SlotOutOfRange { slot: usize, total: usize },

    #[error("embedding positions must be distinct, got repeat of qubit {0}")]
    RepeatedPosition(usize),

    #[error("region target size {target} unreachable: closure saturates at {component} qubits")]
    RegionUnreachable { target: usize, component: usize },

    #[error("region target size must be at least 1")]
    EmptyRegion,

    #[error("region of size {size} must leave at least one qubit outside ({total} total)")]
    RegionTooLarge { size: usize, total: usize },

    #[error("fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("fit abscissa is degenerate (zero slope denominator)")]
    DegenerateFit,

    #[error("operator size never reached threshold {threshold} within {t_cap} steps")]
    ThresholdNotReached { threshold: usize, t_cap: usize },

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("conjugation result is not a phaseless Pauli string: {0}")]
    NotAPauli(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
