use thiserror::Error;

/// Errors raised by the library. Mathematical rejections that are part of an
/// operation's normal answer (e.g. "not unramifiable") are returned as values,
/// not as errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(String),
    #[error("exponent k must be positive")]
    ZeroExponent,
    #[error("quotient modulus is not monic")]
    NonMonicModulus,
    #[error("localization at a zero (or nilpotent) element")]
    ZeroLocalization,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("unsupported base: {0}")]
    UnsupportedBase(String),
    #[error("ring is not local: {0}")]
    NotLocal(String),
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("not a finite field: {0}")]
    NotFiniteField(String),
    #[error("coefficient does not lie in the base ring")]
    CoefficientNotInBase,
    #[error("degree {degree} exceeds the cap {cap}")]
    RankCapExceeded { degree: usize, cap: usize },
    #[error("root is not residually simple")]
    NotSimpleRoot,
    #[error("no residual root: {0}")]
    NoResidualRoot(String),
    #[error("polynomial is not unramifiable")]
    NotUnramifiable,
    #[error("element is not idempotent modulo the maximal ideal")]
    NotResiduallyIdempotent,
    #[error("residual factors are not coprime")]
    NotCoprime,
    #[error("residual factorization does not match: {0}")]
    ResidueMismatch(String),
    #[error("algebras live over different base rings")]
    BaseRingMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("algebra is not Azumaya: {0}")]
    NotAzumaya(String),
    #[error("random search exhausted after {0} draws")]
    RandomnessExhausted(usize),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
