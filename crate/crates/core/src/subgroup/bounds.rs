use serde::{Deserialize, Serialize};

use super::schreier::{rewrite_presentation, SubgroupPresentation};
use super::tietze::{tietze_simplify_tracked, TietzeLevel};
use crate::coset::CosetTable;
use crate::homology::{homology_report, HomologyReport};
use crate::words::Presentation;

/// Interval for the rank of a finite-index subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBounds {
    /// Largest of `β₁` and the requested `b₁,ₚ`.
    pub lower: usize,
    /// Generator count of the simplified Reidemeister–Schreier presentation.
    pub upper: usize,
    /// Set when the bounds coincide or the ambient group is free.
    pub exact: bool,
    pub homology: HomologyReport,
    /// The simplified presentation behind `upper`.
    #[serde(skip)]
    pub presentation: Option<SubgroupPresentation>,
}

/// Rewriting produces `index · Σ|relator|` letters; above this the
/// computation is refused.
pub const REWRITE_LETTER_CAP: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RankError {
    #[error("rewriting at index {index} would produce {letters} relator letters (cap {cap})")]
    RewriteTooLarge { index: usize, letters: usize, cap: usize },
}

/// Rank bounds for the subgroup of `t`.
pub fn rank_bounds(p: &Presentation, t: &CosetTable, primes: &[u64], level: TietzeLevel) -> Result<RankBounds, RankError> {
    let letters = t.index().saturating_mul(p.total_length());
    if letters > REWRITE_LETTER_CAP {
        return Err(RankError::RewriteTooLarge { index: t.index(), letters, cap: REWRITE_LETTER_CAP });
    }
    let rewritten = rewrite_presentation(p, t);
    let simplified = tietze_simplify_tracked(&rewritten, level);
    let homology = homology_report(&simplified.presentation, primes);
    let lower = homology.rank_lower_bound();
    let upper = simplified.presentation.ngens();
    debug_assert!(lower <= upper);
    Ok(RankBounds { lower, upper, exact: lower == upper || p.is_free(), homology, presentation: Some(simplified) })
}
