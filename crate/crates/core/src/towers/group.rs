use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::TowerError;
use crate::coset::{enumerate, CosetTable};
use crate::homology::homology_report;
use crate::subgroup::schreier_generators;
use crate::words::{Presentation, SubgroupSpec, Word};

/// Largest factor group order accepted.
pub const FINITE_ORDER_CAP: usize = 1000;

/// A finite group with its regular action and the invariants the tower
/// formulas need.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub presentation: Presentation,
    pub order: usize,
    /// Right regular action; element `e` is coset `e`, the identity is 0.
    pub regular: CosetTable,
    /// Minimal generator count.
    pub rank: usize,
    pub b1p: BTreeMap<u64, usize>,
}

/// Order, regular action, rank and `b₁,ₚ` of a finite group.
pub fn finite_group(a: &Presentation, primes: &[u64]) -> Result<FiniteGroup, TowerError> {
    let regular = enumerate(a, &SubgroupSpec::trivial(), FINITE_ORDER_CAP).map_err(|source| TowerError::NotFinite { cap: FINITE_ORDER_CAP, source })?;
    let h = homology_report(a, primes);
    if h.beta1 != 0 {
        return Err(TowerError::Invalid("factor group has infinite abelianization".into()));
    }
    let lower = h.b1p.values().copied().max().unwrap_or(0);
    let rank = group_rank(&regular, lower, a.ngens());
    Ok(FiniteGroup { presentation: a.clone(), order: regular.index(), regular, rank, b1p: h.b1p })
}

fn generated_order(t: &CosetTable, words: &[&Word]) -> usize {
    let mut seen = vec![false; t.index()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(e) = stack.pop() {
        for w in words {
            let f = t.act_word(e, w);
            if !seen[f] {
                seen[f] = true;
                count += 1;
                stack.push(f);
            }
        }
    }
    count
}

/// Smallest `k` such that some `k` elements generate; searched from `lower`
/// up to one below the presentation's generator count.
fn group_rank(t: &CosetTable, lower: usize, ngens: usize) -> usize {
    let order = t.index();
    if order == 1 {
        return 0;
    }
    let elements = schreier_generators(t).transversal;
    for k in lower.max(1)..ngens {
        let mut combo: Vec<usize> = (1..=k).collect();
        loop {
            let words: Vec<&Word> = combo.iter().map(|&i| &elements[i]).collect();
            if generated_order(t, &words) == order {
                return k;
            }
            // next combination of k elements from 1..order
            let mut i = k;
            while i > 0 && combo[i - 1] == order - 1 - (k - i) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..k {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    ngens
}
