use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^31)")]
    ModulusTooLarge(u64),
    #[error("ell = {ell} does not divide p - 1 = {}", p - 1)]
    EllDoesNotDivide { p: u64, ell: u64 },
    #[error("extension degree {m} exceeds the cap {cap}")]
    DegreeCap { m: usize, cap: usize },
    #[error("degree {src} does not divide degree {dst}")]
    NotSubfield { src: usize, dst: usize },
    #[error("singular curve: discriminant vanishes")]
    Singular,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("support collision in Miller evaluation")]
    Collision,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
