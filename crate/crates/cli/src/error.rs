use thiserror::Error;

use rankgrad::chains::ChainError;
use rankgrad::coset::{CoreError, EnumerateError, LowIndexError};
use rankgrad::graphings::GraphingError;
use rankgrad::subgroup::RankError;
use rankgrad::towers::TowerError;
use rankgrad::words::ParseError;

/// Failure classes, each with its own exit status.
///
/// | status | meaning |
/// |---|---|
/// | 1 | I/O error |
/// | 2 | parse error or invalid input |
/// | 3 | a budget (coset, node, index, label, attempt) was exhausted |
/// | 4 | an internal invariant failed; this is a bug |
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<EnumerateError> for CliError {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::IndexBoundExceeded(_) => CliError::Budget(e.to_string()),
            EnumerateError::BadGenerator => CliError::Parse(e.to_string()),
        }
    }
}

impl From<LowIndexError> for CliError {
    fn from(e: LowIndexError) -> Self {
        CliError::Budget(e.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Budget(e.to_string())
    }
}

impl From<RankError> for CliError {
    fn from(e: RankError) -> Self {
        CliError::Budget(e.to_string())
    }
}

impl From<ChainError> for CliError {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::Enumerate(e) => e.into(),
            ChainError::LowIndex(e) => e.into(),
            ChainError::Core(e) => e.into(),
            ChainError::IndexCap { .. } => CliError::Budget(e.to_string()),
            ChainError::NotNested { .. } => CliError::Invariant(e.to_string()),
            ChainError::IndexMismatch { .. } | ChainError::NotNormal { .. } | ChainError::UnknownGenerator(_) | ChainError::Parameter(_) => {
                CliError::Parse(e.to_string())
            }
        }
    }
}

impl From<GraphingError> for CliError {
    fn from(e: GraphingError) -> Self {
        match e {
            GraphingError::LabelTooLong { .. } => CliError::Budget(e.to_string()),
            GraphingError::NotLGraphing(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<TowerError> for CliError {
    fn from(e: TowerError) -> Self {
        match e {
            TowerError::Enumerate(e) => e.into(),
            TowerError::Rank(e) => e.into(),
            TowerError::NotFinite { .. } | TowerError::RadiusStalled { .. } => CliError::Budget(e.to_string()),
            TowerError::Invalid(_) => CliError::Invariant(e.to_string()),
            TowerError::TrivialFactor | TowerError::BadTarget(_) | TowerError::Infeasible { .. } => CliError::Parse(e.to_string()),
        }
    }
}
