//! Crate-wide error type. Every precondition failure is a named variant so
//! callers (and the CLI exit-code mapping) can distinguish bad inputs from
//! verification failures.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("number of categories must be at least 3, got {0}")]
    TooFewCategories(usize),
    #[error("class must contain at least one function")]
    EmptyClass,
    #[error("class must contain at least one description point")]
    EmptyDomain,
    #[error("function names must be unique, `{0}` repeats")]
    DuplicateName(String),
    #[error("value table for `{name}` has wrong shape at point {point}")]
    BadTableShape { name: String, point: usize },
    #[error("value bound M must satisfy M >= 1, got {0}")]
    BoundTooSmall(String),
    #[error("value {value} exceeds the declared bound {bound}")]
    ValueOutOfRange { value: String, bound: String },
    #[error("category index {y} out of range [1, {c}]")]
    CategoryOutOfRange { y: usize, c: usize },
    #[error("description index {x} out of range [0, {n})")]
    PointOutOfRange { x: usize, n: usize },
    #[error("function index {f} out of range [0, {n})")]
    FunctionOutOfRange { f: usize, n: usize },
    #[error("sample must be non-empty")]
    EmptySample,
    #[error("sample point ({x}, {y}) is not in the class domain")]
    PointNotInDomain { x: usize, y: usize },
    #[error("gamma must lie in (0, 1], got {0}")]
    GammaOutOfRange(String),
    #[error("gamma must be positive, got {0}")]
    GammaNotPositive(String),
    #[error("eta must be positive, got {0}")]
    EtaNotPositive(String),
    #[error("eps must lie in ({lo}, {hi}], got {eps}")]
    EpsOutOfRange { eps: String, lo: String, hi: String },
    #[error("operation requires a real-valued class, got an integer-valued one")]
    ExpectedRealValues,
    #[error("operation requires an integer-valued class, got a real-valued one")]
    ExpectedIntegerValues,
    #[error("kind/class mismatch: {0}")]
    KindMismatch(String),
    #[error("witness length {got} does not match point count {expected}")]
    WitnessLength { got: usize, expected: usize },
    #[error("witness categories must differ from point labels (c_i != y_i)")]
    WitnessCategoryClash,
    #[error("witness {0} must be an integer in [-(M-1), M-1] for strong shattering")]
    WitnessNotIntegral(String),
    #[error("p must satisfy p >= 1")]
    BadExponent,
    #[error("search cap exceeded: {what} = {got} > {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("parameter `{name}` = {value} violates `{requirement}`")]
    Parameter {
        name: &'static str,
        value: String,
        requirement: &'static str,
    },
    #[error("sample size m = {m} below the validity threshold {threshold} for this bound")]
    SampleTooSmall { m: String, threshold: String },
    #[error("bound evaluation produced a non-finite number in `{0}`")]
    NonFinite(&'static str),
    #[error("chaining schedule invalid: {0}")]
    BadSchedule(String),
    #[error("unknown verification suite `{0}`")]
    UnknownLemma(String),
    #[error("cannot parse `{0}` as an exact rational (use a/b or a terminating decimal)")]
    BadRational(String),
    #[error("malformed class file: {0}")]
    BadClassFile(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
