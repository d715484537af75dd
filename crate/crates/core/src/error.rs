use thiserror::Error;

/// Errors raised by matrix/grouping construction, parsing, and the search
/// front ends. Unit indices and line numbers are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have at least one unit")]
    EmptyMatrix,

    #[error("matrix is not symmetric: entry ({row},{col}) differs from ({col},{row})")]
    Asymmetric { row: usize, col: usize },

    #[error("matrix row {row} has {found} columns, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix entry ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("tolerance must be a finite non-negative number, got {0}")]
    InvalidTolerance(f64),

    #[error("{source_name}, line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("grouping needs at least 2 groups, got {0}")]
    TooFewGroups(usize),

    #[error("group {0} has no units")]
    EmptyGroup(usize),

    #[error("unit {0} is not assigned to any group")]
    UnassignedUnit(usize),

    #[error("unit {0} is assigned more than once")]
    DuplicateAssignment(usize),

    #[error("group label {label} for unit {unit} must be between 1 and {k}")]
    InvalidLabel { unit: usize, label: usize, k: usize },

    #[error("matrix has {matrix} units but grouping has {grouping}")]
    SizeMismatch { matrix: usize, grouping: usize },

    #[error("unit {unit} out of range 1..={n}")]
    UnitOutOfRange { unit: usize, n: usize },

    #[error("precision parameter m_bar must be at least 1")]
    InvalidMBar,

    #[error("unit {0} appears more than once")]
    DuplicateUnit(usize),

    #[error("units {first} and {second} belong to the same group")]
    SharedGroup { first: usize, second: usize },

    #[error("instance too large for exhaustive enumeration: {tuples} tuple tests exceed the limit of {limit}")]
    OracleTooLarge { tuples: u128, limit: u128 },

    #[error("p outside (0,1): {0}")]
    InvalidProbability(f64),

    #[error("cannot split {n} units into {k} nonempty groups")]
    TooManyGroups { n: usize, k: usize },

    #[error("random grouping left a group empty after {0} redraws")]
    GroupingRetriesExhausted(usize),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
