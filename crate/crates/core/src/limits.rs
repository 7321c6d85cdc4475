use crate::error::{Error, Result};

/// Universe-size guards for the exhaustive algorithms.
///
/// Each exhaustive routine refuses universes above its bound rather than
/// running for an unbounded time. [`Limits::uniform`] raises or lowers all of
/// them at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Brute-force semi-graphoid and stable closures.
    pub closure: usize,
    /// Chain-by-chain separation oracle.
    pub chain_oracle: usize,
    /// Extraction of graphical independence models.
    pub models: usize,
    /// Exhaustive condition checks (C1–C7, stable transitivity, closedness).
    pub conditions: usize,
    /// Labeled-DAG perfect-map search.
    pub pmap_search: usize,
    /// Listing every statement of a closure.
    pub expansion: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            closure: 6,
            chain_oracle: 8,
            models: 7,
            conditions: 7,
            pmap_search: 5,
            expansion: 10,
        }
    }
}

impl Limits {
    pub fn uniform(max_vars: usize) -> Self {
        Limits {
            closure: max_vars,
            chain_oracle: max_vars,
            models: max_vars,
            conditions: max_vars,
            pmap_search: max_vars,
            expansion: max_vars,
        }
    }
}

pub(crate) fn guard(operation: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::GuardExceeded {
            operation,
            size,
            limit,
        })
    } else {
        Ok(())
    }
}
