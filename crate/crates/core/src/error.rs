use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant of an imaginary quadratic field")]
    NotFundamental(i64),
    #[error("{0} is not a rational prime")]
    NotPrime(u64),
    #[error("operands belong to different fields (d = {0} and d = {1})")]
    MixedField(i64, i64),
    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,
    #[error("not a valid ideal in Hermite normal form: {0}")]
    InvalidHnf(String),
    #[error("modulus must be a nonzero proper integral ideal")]
    UnitModulus,
    #[error("ideal {0} is not coprime to the modulus {1}")]
    NotCoprime(String, String),
    #[error("{0} does not divide {1}")]
    NotDivisor(String, String),
    #[error("resource cap exceeded: {what} > {cap}")]
    CapExceeded { what: &'static str, cap: u64 },
    #[error("value out of desk-scale range: {0}")]
    OutOfRange(String),
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("subgroup relation does not hold: {0}")]
    NotSubgroup(String),
    #[error("root r does not satisfy r^n = chi(g^n): {0}")]
    BadRoot(String),
    #[error("no admissible character exists (failing prime {0})")]
    NoCharacter(String),
    #[error("the trivial character is not allowed here")]
    TrivialCharacter,
    #[error("argument rejected: {0}")]
    InvalidArgument(String),
    #[error("invalid gamma: {0}")]
    InvalidGamma(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
