use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget exceeded: {what} needs {required} but the limit is {limit} (set QZRP_BUDGET to raise it)")]
    Budget { what: String, required: u128, limit: u128 },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Hard cap on the size of exhaustive enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub limit: u128,
}

impl Budget {
    pub const DEFAULT_LIMIT: u128 = 2_000_000;

    pub fn new(limit: u128) -> Self {
        Budget { limit }
    }

    /// The default limit, overridden by `QZRP_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let limit = std::env::var("QZRP_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(Self::DEFAULT_LIMIT);
        Budget { limit }
    }

    pub fn unlimited() -> Self {
        Budget { limit: u128::MAX }
    }

    pub fn check(&self, what: &str, required: u128) -> Result<()> {
        if required > self.limit {
            Err(Error::Budget { what: what.to_string(), required, limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Guard for `n^size` fillings.
    pub fn check_fillings(&self, n: u32, size: u32) -> Result<()> {
        let required = (n as u128).checked_pow(size).unwrap_or(u128::MAX);
        self.check("filling enumeration", required)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}
