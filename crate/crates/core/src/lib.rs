//! Maxima Units Search (MUS).
//!
//! Given a symmetric matrix with many zeros and a partition of its units into
//! `K` groups, MUS picks one pivotal unit per group: the unit that takes part
//! in the largest number of `K x K` identity submatrices (one unit per group,
//! all off-diagonal entries zero).
//!
//! The pipeline is
//!
//! 1. [`ZeroPattern::build`] binarizes a [`SymmetricMatrix`],
//! 2. [`select_candidates`] keeps the `m_bar` units per group with the most
//!    zeros toward other groups,
//! 3. [`count_identity_submatrices`] counts, for each candidate, the identity
//!    submatrices it belongs to,
//! 4. [`select_maxima`] takes the per-group argmax.
//!
//! Unit indices are 0-based throughout the library API; file formats and
//! reports are 1-based.

pub mod bitset;
pub mod cli;
mod error;
pub mod fixtures;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod search;
pub mod simulation;

pub use error::{Error, Result};
pub use matrix::{zeros_toward_other_groups, Grouping, SymmetricMatrix, Tolerance, ZeroPattern};
pub use oracle::{oracle_count, oracle_maxima, OracleOptions, OracleReport};
pub use search::{
    build_p_set, count_identity_submatrices, select_candidates, select_maxima,
    select_maxima_par, verify_identity, Candidate, CandidateSet, GroupOutcome, PSet,
    PivotResult, ScoredCandidate, Status,
};
