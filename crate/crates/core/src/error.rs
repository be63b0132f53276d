use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("modulus degree {found} does not match extension degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields or rings")]
    SpecMismatch,
    #[error("enumeration of {count} candidates exceeds cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("zero polynomial or zero element not allowed here")]
    ZeroPolynomial,
    #[error("no embedding of the source field into the target field")]
    NoEmbedding,
    #[error("q = {0} equals the characteristic")]
    CharacteristicClash(u64),
    #[error("inputs must differ")]
    EqualInputs,
    #[error("Weierstrass model is singular")]
    SingularModel,
    #[error("cycle search exceeded cap {0}")]
    CycleCapExceeded(u64),
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("(X, Y) is not a solution of Y^n = f(X)")]
    NotASolution,
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
