use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operands live in different rings: {0}")]
    RingMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero series has no valuation")]
    ZeroSeries,
    #[error("cannot factor {exp} powers of {var}: valuation is {valuation}")]
    FactorTooLarge {
        var: String,
        exp: u32,
        valuation: u32,
    },
    #[error("substitution would make truncation unsound: {0}")]
    ConstantTerm(String),
    #[error("negative valuation {0} cannot be reduced mod p")]
    NegativeValuation(i32),
    #[error("denominator p^{found} exceeds the bound p^{bound}")]
    DenominatorBound { found: i32, bound: i32 },
    #[error("coefficient is not integral (valuation {0})")]
    NotIntegral(i32),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("missing scalar [{0}] in the module table")]
    MissingScalar(String),
    #[error("valuation mismatch: expected {expected}, found {found} ({context})")]
    ValuationMismatch {
        expected: u32,
        found: u32,
        context: String,
    },
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("element has order {found}, which does not divide {modulus}")]
    WrongOrder { found: u64, modulus: u64 },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("malformed serialized data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
