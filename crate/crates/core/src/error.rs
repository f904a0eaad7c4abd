use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "field Q(sqrt(-{0})) is not one of the nine class-number-one imaginary quadratic fields"
    )]
    UnsupportedField(i64),
    #[error("{p} is inert in Q(sqrt(-{d}))")]
    InertPrime { p: u64, d: u32 },
    #[error("{p} ramifies in Q(sqrt(-{d}))")]
    RamifiedPrime { p: u64, d: u32 },
    #[error("{0} is not a prime >= 5")]
    NotAPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("element is not invertible modulo {0}")]
    NonInvertible(String),
    #[error("could not factor {0}")]
    FactorizationFailure(u64),
    #[error("fields differ: d={0} and d={1}")]
    FieldMismatch(u32, u32),
    #[error("precision of {0} bits is below the minimum of 128")]
    PrecisionTooLow(u32),
    #[error("pole of the Weierstrass function: point lies on the lattice")]
    PoleAtLatticePoint,
    #[error("evaluation at the divisor of theta: {0}")]
    EvaluationAtDivisor(String),
    #[error("invalid input: {0}")]
    Precondition(String),
    #[error("coset representatives inconsistent: {0}")]
    BadCosets(String),
    #[error("1 - x is not invertible mod p since x = {0} is 1 mod p")]
    NonInvertibleDenominator(u64),
    #[error("ideal not admissible: {0}")]
    Admissibility(String),
    #[error(
        "could not recognize coefficients in O_K: residual 2^{log2_residual:.1} exceeds tolerance"
    )]
    RecognitionFailure { log2_residual: f64 },
    #[error("the projected and direct computations of epsilon differ by 2^{log2_residual:.1}")]
    PipelineMismatch { log2_residual: f64 },
    #[error("no usable test prime q below {bound}")]
    SearchExhausted { bound: u64 },
    #[error("invalid character index: {0}")]
    InvalidIndex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
