//! Generators, presentations and rank bounds of finite-index subgroups.

mod bounds;
mod schreier;
mod stallings;
mod tietze;

pub use bounds::{rank_bounds, RankBounds, RankError, REWRITE_LETTER_CAP};
pub use schreier::{rewrite_presentation, schreier_generators, SchreierData, SubgroupPresentation};
pub use stallings::{stallings_fold, FoldResult, FoldedGraph};
pub use tietze::{tietze_simplify, tietze_simplify_tracked, TietzeLevel, SUBSTITUTION_LENGTH_CAP, TOTAL_LENGTH_CAP};
