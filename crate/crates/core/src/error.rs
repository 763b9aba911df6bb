use thiserror::Error;

/// Errors raised by the exact-computation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("resource limit exceeded: {what} needs {needed} units, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("degenerate poset: {0}")]
    DegeneratePoset(String),

    #[error("degenerate construction: {0}")]
    DegenerateConstruction(String),

    #[error("host mismatch: {0}")]
    HostMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code: 2 for degenerate inputs, 3 for exhausted budgets, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegeneratePoset(_) | Error::DegenerateConstruction(_) => 2,
            Error::Budget { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default cap on enumerated points / subsets.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Environment variable overriding [`DEFAULT_BUDGET`] in front ends.
pub const BUDGET_ENV: &str = "SYMVEC_BUDGET";

pub(crate) fn check_budget(what: &'static str, needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::Budget {
            what,
            needed,
            budget,
        })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn pow_saturating(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
