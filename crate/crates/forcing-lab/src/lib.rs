//! Exact algorithms around perfect matchings: global forcing and anti-forcing
//! numbers, conformal cycles and minors, matching-covered structure,
//! subdivision surgeries, family classification, and a verification harness
//! that checks the shipped catalog and the library's own structural claims on
//! exhaustive and randomized graph pools.
//!
//! Everything in this crate is exact; there are no heuristics or
//! approximations. Searches that can become expensive accept explicit caps
//! and report cap exhaustion as a distinct outcome — never as "false".

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod canon;
pub mod cycles;
pub mod families;
pub mod forcing;
pub mod graph;
pub mod matching;
pub mod minors;
pub mod surgery;
pub mod verify;

pub use graph::Graph;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A graph or catalog file failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse {
        /// 1-based line number of the offending input line.
        line: usize,
        /// Human-readable description of the problem.
        msg: String,
    },
    /// Structural validation of a graph failed.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    /// An operation requiring a connected graph received a disconnected one.
    #[error("graph is disconnected")]
    Disconnected,
    /// An operation requiring a bipartite graph received a non-bipartite one.
    #[error("graph is not bipartite")]
    NotBipartite,
    /// An operation requiring a perfect matching to exist received a graph
    /// without one.
    #[error("graph has no perfect matching")]
    NotMatchable,
    /// An operation requiring a matching covered graph received something else.
    #[error("graph is not matching covered")]
    NotMatchingCovered,
    /// An operation-specific precondition was violated; the message names it.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A configured search cap was exceeded; the result is unknown, not false.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// A search problem has no solution (e.g. an empty hitting-set target).
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// The requested verification property does not exist.
    #[error("unknown property: {0}")]
    UnknownProperty(String),
    /// The catalog file is malformed or fails its load-time value checks.
    #[error("catalog error: {0}")]
    Catalog(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Iterate the set bits of a mask as indices, ascending.
#[inline]
pub(crate) fn bits(mask: u128) -> impl Iterator<Item = usize> {
    std::iter::successors(
        if mask == 0 { None } else { Some(mask) },
        |m| {
            let next = m & (m - 1);
            if next == 0 {
                None
            } else {
                Some(next)
            }
        },
    )
    .map(|m| m.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::bits;

    #[test]
    fn bit_iteration_is_ascending_and_complete() {
        let mask: u128 = (1 << 3) | (1 << 7) | (1 << 100);
        assert_eq!(bits(mask).collect::<Vec<_>>(), vec![3, 7, 100]);
        assert_eq!(bits(0).count(), 0);
    }
}
