use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// Variants are split between input/hypothesis problems (bad data, theorem
/// hypotheses unmet) and internal consistency failures that indicate a bug.
/// [`Error::is_input_error`] drives the CLI exit-code contract.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime (or exceeds the supported range)")]
    NotPrime(u64),
    #[error("no primitive {m}-th root of unity in F_{p}: {m} does not divide {}", p - 1)]
    NoRoot { m: u64, p: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("iteration cap {0} exceeded")]
    CapExceeded(u64),
    #[error("{0} is not a primitive {1}-th root of unity")]
    BadRoot(u64, u64),
    #[error("structure constants violate associativity at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("designated unit is not a two-sided identity (fails at basis index {0})")]
    NotUnital(usize),
    #[error("comultiplication data violates the {0} axiom at basis index {1}")]
    HopfAxiom(&'static str, usize),
    #[error(
        "no Frobenius form found after {attempts} attempts (seed {seed}): the Gram determinant \
         vanished on every sampled form; for p = {p} >> dim * attempts this is strong evidence \
         the algebra is not Frobenius, though not a proof"
    )]
    NotFrobeniusWithinAttempts { attempts: u64, seed: u64, p: u64 },
    #[error("the given form has a singular Gram matrix and is not a Frobenius homomorphism")]
    SingularGram,
    #[error("internal: defining system for the Nakayama automorphism is inconsistent")]
    InconsistentSystem,
    #[error(
        "hypothesis failure: the Nakayama order m = {m} does not divide p - 1 = {}; \
         F_{p} has no primitive m-th root of unity, so the eigenspace decomposition \
         does not exist over this field",
        p - 1
    )]
    HypothesisFailure { m: u64, p: u64 },
    #[error("degree {degree} exceeds the memory budget ({need_mb} MB needed, {budget_mb} MB allowed)")]
    DegreeTooLarge {
        degree: usize,
        need_mb: u64,
        budget_mb: u64,
    },
    #[error("the grading is not strongly graded: class {0} admits no partition of unity")]
    NotStronglyGraded(usize),
    #[error("right integral space has dimension {0}, expected 1")]
    IntegralSpaceNotOneDim(usize),
    #[error("modular element is inconsistent: left multiplication does not scale the integral")]
    InconsistentModular,
    #[error("no one-sided integral convention yields an invertible Gram matrix")]
    ConventionMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("the {0} constructor does not carry a Hopf structure")]
    NotHopf(&'static str),
}

impl Error {
    /// True for errors caused by user input or unmet theorem hypotheses
    /// (CLI exit code 2), as opposed to internal invariant violations.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::NoRoot { .. }
                | Error::BadRoot(..)
                | Error::NotAssociative(..)
                | Error::NotUnital(_)
                | Error::HopfAxiom(..)
                | Error::NotFrobeniusWithinAttempts { .. }
                | Error::SingularGram
                | Error::HypothesisFailure { .. }
                | Error::DegreeTooLarge { .. }
                | Error::NotStronglyGraded(_)
                | Error::Parse(_)
                | Error::NotHopf(_)
                | Error::CapExceeded(_)
        )
    }
}
