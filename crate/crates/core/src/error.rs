use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("class has {got} multiplicities, surface expects {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("coordinates do not give an integral class: {0}")]
    NonIntegral(String),
    #[error("({d},{g}) lies outside the strip: {detail}")]
    OutOfStrip { d: i64, g: i64, detail: String },
    #[error("construction not available here: {0}")]
    Region(String),
    #[error("lift requires last multiplicity 0, found {0}")]
    Lift(i64),
    #[error("no construction route reaches ({d},{g}) on X^{n}_{p}")]
    Unreachable { n: i64, p: i64, d: i64, g: i64 },
    #[error("(n,d,g) = ({n},{d},{g}) is labelled {label}; its construction is delegated")]
    Delegated { n: i64, d: i64, g: i64, label: String },
    #[error("class is not of the expected shape: {0}")]
    Shape(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("search space of {requested} classes exceeds cap {cap}")]
    ResourceCap { requested: u128, cap: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
