//! Covering towers for free products `A ∗ ℤ` with a finite factor `A`:
//! generation with a prescribed fixed-vertex fraction, closed-form
//! predictions and verification against computed invariants.

mod build;
mod cover;
mod group;
mod predict;
mod verify;

pub use build::{build_tower, cover_with_mu, Tower, DEFAULT_LIFT_ATTEMPTS};
pub use cover::{CoverGraph, Radius, DEFAULT_RADIUS_CAP};
pub use group::{finite_group, FiniteGroup, FINITE_ORDER_CAP};
pub use predict::{predict_stats, GroupStats, Limits, Prediction, PredictError};
pub use verify::{subgroup_from_cover, tower_report, verify_level, Comparison, Computed, LevelPrediction, TowerLevelReport, TowerReport};

use thiserror::Error;

use crate::coset::EnumerateError;
use crate::subgroup::RankError;

#[derive(Debug, Clone, Error)]
pub enum TowerError {
    #[error("factor group is not finite within {cap} elements: {source}")]
    NotFinite { cap: usize, source: EnumerateError },
    #[error("factor group is trivial")]
    TrivialFactor,
    #[error("target fraction {0} must lie in [0, 1)")]
    BadTarget(String),
    #[error("no orbit layout on {n} points has fixed fraction {mu}; the smallest feasible point count is {minimal_n}")]
    Infeasible { n: usize, mu: String, minimal_n: usize },
    #[error("cover is invalid: {0}")]
    Invalid(String),
    #[error("level {level}: no lift in {attempts} attempts increased the injectivity radius past {radius}")]
    RadiusStalled { level: usize, attempts: usize, radius: usize },
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Rank(#[from] RankError),
}
