use std::fmt;

/// Edge of a `[d_lo, d_hi] x [r_lo, r_hi]` rectangle in the reduced `(d, r)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    DLow,
    DHigh,
    RLow,
    RHigh,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Edge::DLow => "d = d_lo",
            Edge::DHigh => "d = d_hi",
            Edge::RLow => "r = r_lo",
            Edge::RHigh => "r = r_hi",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("series did not converge within {terms} terms (tail bound {tail:e})")]
    NonConvergence { terms: usize, tail: f64 },

    #[error("|x - y| = {distance:e} is below the clearance {clearance:e}; use the regular part near the diagonal")]
    Singularity { distance: f64, clearance: f64 },

    #[error("circulant row is not palindromic (defect {0:e})")]
    Asymmetry(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no sign change: {0}")]
    Bracket(String),

    #[error("sign precondition violated: {0}")]
    Sign(String),

    #[error("gradient sign violated on edge {edge} at (d, r) = ({d}, {r}): component = {value:e}")]
    BoundaryViolation {
        edge: Edge,
        d: f64,
        r: f64,
        value: f64,
    },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by a series that failed to reach its tail tolerance.
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
