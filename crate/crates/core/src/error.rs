use thiserror::Error;

pub type Result<T> = std::result::Result<T, HurwitzError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    #[error("series is not a unit: constant term is zero")]
    NonUnit,

    #[error("exponent {exponent} of z{var} is beyond its cap {cap}")]
    BeyondCap { var: usize, exponent: u32, cap: u32 },

    #[error("exponent vector has {got} entries, series has {expected} variables")]
    ArityMismatch { expected: usize, got: usize },

    #[error("operators share z-variables {0}")]
    OverlappingVariables(String),

    #[error("fermion window overflow: slot {slot} lies outside [-{bound}, {bound}]")]
    WindowOverflow { slot: String, bound: i64 },

    #[error("leak parameter must be positive here, got k = {0}")]
    NonPositiveLeak(i64),

    #[error("produced parts sum to {produced}, consumed parts plus leak sum to {expected}")]
    EnergyMismatch { produced: i64, expected: i64 },

    #[error("wall offset delta vanishes; the crossing formula needs chamber-side data")]
    ZeroDelta,

    #[error("chamber fit failed: {0}")]
    FitFailed(String),

    #[error("chamber polynomial mismatch at held-out point {point}: fit gives {fitted}, engine gives {actual}")]
    HeldOutMismatch {
        point: String,
        fitted: String,
        actual: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache error: {0}")]
    Cache(String),
}
