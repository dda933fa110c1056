use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wild ramification: p = {p} divides e_{level} = {e}")]
    WildRamification { p: u64, level: usize, e: u64 },
    #[error("non-divisible tower at level {level}: indices must divide those of the next level")]
    NonDivisibleTower { level: usize },
    #[error("tower degrees not strictly increasing at level {level}")]
    NotIncreasing { level: usize },
    #[error("level mismatch: expected {expected}, got {got}")]
    LevelMismatch { expected: usize, got: usize },
    #[error("element lies outside the S^(n) ball at level {level}")]
    OutOfBall { level: usize },
    #[error("enumeration cap exceeded at level {level}: group order {order} > cap {cap}")]
    EnumerationCapExceeded { level: usize, order: f64, cap: u64 },
    #[error("field arithmetic not built for level {level} (cap {cap})")]
    CapExceeded { level: usize, cap: usize },
    #[error("invalid level pair: N = {n_small} must be < n = {n_big}")]
    InvalidLevels { n_small: usize, n_big: usize },
    #[error("Lévy mass of the identity coset requested")]
    ZeroCoset,
    #[error("non-positive time t = {t}")]
    NonPositiveTime { t: f64 },
    #[error("dual shell {shell} outside the range [{lo}, {hi}]")]
    ShellOutOfRange { shell: usize, lo: usize, hi: usize },
    #[error("alpha = {alpha} too small: B_n requires alpha > log_q1(2) = {threshold}")]
    AlphaTooSmall { alpha: f64, threshold: f64 },
    #[error("tameness violated at level {level}: different scan gave {got}, expected {expected}")]
    TamenessViolated { level: usize, got: i64, expected: i64 },
    #[error("path censored: stopping rule ended before the requested exit")]
    Censored,
    #[error("distance finer than the resolution of level {level}")]
    Unresolvable { level: usize },
    #[error("b_n = 0 at level {level} (first block of the n(j) sequence)")]
    ZeroBn { level: usize },
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure in {identity}: {detail}")]
    NumericalFailure { identity: String, detail: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
