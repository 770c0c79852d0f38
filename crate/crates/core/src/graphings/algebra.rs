use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coset::CosetTable;
use crate::fraction::Fraction;
use crate::words::Word;

/// Longest label a composition may produce.
pub const DEFAULT_LABEL_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphingError {
    #[error("label {left:?}·{right:?} has length {len}, above the cap of {cap}")]
    LabelTooLong { left: Word, right: Word, len: usize, cap: usize },
    #[error("graphing lives on {found} cosets, level has {expected}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("coset {coset} out of range for index {index}")]
    CosetOutOfRange { coset: usize, index: usize },
    #[error("chain has no level {0}")]
    NoLevel(usize),
    #[error("generator {position} ({word:?}) does not lie in the level subgroup")]
    NotInSubgroup { position: usize, word: Word },
    #[error("not an L-graphing: {0}")]
    NotLGraphing(String),
}

/// Finitely many labels, each with a nonempty set of cosets of one level.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graphing {
    index: usize,
    fibers: BTreeMap<Word, BTreeSet<usize>>,
}

/// One fiber with its label rendered in generator names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphingEntry {
    pub label: String,
    pub cosets: Vec<usize>,
}

impl Graphing {
    pub fn empty(index: usize) -> Self {
        Graphing { index, fibers: BTreeMap::new() }
    }

    /// Label `ε` on every coset.
    pub fn identity(index: usize) -> Self {
        let mut g = Graphing::empty(index);
        if index > 0 {
            g.fibers.insert(Word::identity(), (0..index).collect());
        }
        g
    }

    pub fn from_incidences<I: IntoIterator<Item = (usize, Word)>>(index: usize, items: I) -> Result<Self, GraphingError> {
        let mut g = Graphing::empty(index);
        for (c, w) in items {
            g.insert(c, w)?;
        }
        Ok(g)
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn fibers(&self) -> &BTreeMap<Word, BTreeSet<usize>> {
        &self.fibers
    }

    pub fn fiber(&self, label: &Word) -> Option<&BTreeSet<usize>> {
        self.fibers.get(label)
    }

    pub fn insert(&mut self, coset: usize, label: Word) -> Result<bool, GraphingError> {
        if coset >= self.index {
            return Err(GraphingError::CosetOutOfRange { coset, index: self.index });
        }
        Ok(self.fibers.entry(label).or_default().insert(coset))
    }

    pub fn remove(&mut self, coset: usize, label: &Word) -> bool {
        let Some(f) = self.fibers.get_mut(label) else { return false };
        let removed = f.remove(&coset);
        if f.is_empty() {
            self.fibers.remove(label);
        }
        removed
    }

    pub fn contains(&self, coset: usize, label: &Word) -> bool {
        self.fibers.get(label).is_some_and(|f| f.contains(&coset))
    }

    /// `(coset, label)` pairs in label order.
    pub fn incidences(&self) -> impl Iterator<Item = (usize, &Word)> + '_ {
        self.fibers.iter().flat_map(|(w, f)| f.iter().map(move |&c| (c, w)))
    }

    pub fn incidence_count(&self) -> usize {
        self.fibers.values().map(|f| f.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    /// `e(M) = Σ |fiber| / index`.
    pub fn edge_measure(&self) -> Fraction {
        if self.index == 0 {
            return Fraction::zero();
        }
        Fraction::new(self.incidence_count() as i64, self.index as i64)
    }

    pub fn union(&self, other: &Graphing) -> Graphing {
        let mut out = self.clone();
        for (w, f) in &other.fibers {
            out.fibers.entry(w.clone()).or_default().extend(f.iter().copied());
        }
        out
    }

    fn check(&self, t: &CosetTable) -> Result<(), GraphingError> {
        if t.index() != self.index {
            return Err(GraphingError::IndexMismatch { expected: t.index(), found: self.index });
        }
        Ok(())
    }

    /// `(c·γ, γ⁻¹)` for every `(c, γ)`.
    pub fn transpose(&self, t: &CosetTable) -> Result<Graphing, GraphingError> {
        self.check(t)?;
        let mut out = Graphing::empty(self.index);
        for (c, w) in self.incidences() {
            out.fibers.entry(w.inverse()).or_default().insert(t.act_word(c, w));
        }
        Ok(out)
    }

    /// `M ∪ Mᵀ ∪ I`.
    pub fn bar(&self, t: &CosetTable) -> Result<Graphing, GraphingError> {
        Ok(self.union(&self.transpose(t)?).union(&Graphing::identity(self.index)))
    }

    /// `(c, γ₁γ₂)` for `(c, γ₁) ∈ M` and `(c·γ₁, γ₂) ∈ N`.
    pub fn compose(&self, other: &Graphing, t: &CosetTable, cap: usize) -> Result<Graphing, GraphingError> {
        self.check(t)?;
        other.check(t)?;
        let mut at: Vec<Vec<&Word>> = vec![Vec::new(); self.index];
        for (c, w) in other.incidences() {
            at[c].push(w);
        }
        let mut out = Graphing::empty(self.index);
        for (c, w1) in self.incidences() {
            for &w2 in &at[t.act_word(c, w1)] {
                let w = w1.concat(w2);
                if w.len() > cap {
                    return Err(GraphingError::LabelTooLong { left: w1.clone(), right: w2.clone(), len: w.len(), cap });
                }
                out.fibers.entry(w).or_default().insert(c);
            }
        }
        Ok(out)
    }

    /// `M¹ = M̄`, `Mᵏ = Mᵏ⁻¹ ∪ Mᵏ⁻¹·M̄`.
    pub fn power(&self, k: usize, t: &CosetTable, cap: usize) -> Result<Graphing, GraphingError> {
        assert!(k >= 1, "power needs k ≥ 1");
        let b = self.bar(t)?;
        let mut m = b.clone();
        for _ in 1..k {
            m = m.union(&m.compose(&b, t, cap)?);
        }
        Ok(m)
    }

    /// Coset-to-coset pairs `(c, c·γ)`.
    pub fn projected(&self, t: &CosetTable) -> Result<BTreeSet<(usize, usize)>, GraphingError> {
        self.check(t)?;
        Ok(self.incidences().map(|(c, w)| (c, t.act_word(c, w))).collect())
    }

    pub fn entries<S: AsRef<str>>(&self, names: &[S]) -> Vec<GraphingEntry> {
        self.fibers.iter().map(|(w, f)| GraphingEntry { label: w.display(names), cosets: f.iter().copied().collect() }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::enumerate;
    use crate::presets::free_group;
    use crate::words::SubgroupSpec;

    fn index_two() -> CosetTable {
        let p = free_group(2);
        enumerate(&p, &SubgroupSpec::new(vec![p.parse_word("a^2").unwrap(), p.parse_word("b").unwrap(), p.parse_word("a b a^-1").unwrap()]), 10).unwrap()
    }

    #[test]
    fn measures() {
        assert_eq!(Graphing::empty(4).edge_measure(), Fraction::zero());
        let a = Word::generator(0);
        let b = Word::generator(1);
        let g = Graphing::from_incidences(4, [(0, a.clone()), (1, a), (0, b.clone()), (1, b.clone()), (2, b.clone()), (3, b)]).unwrap();
        assert_eq!(g.edge_measure(), Fraction::new(3, 2));
    }

    #[test]
    fn bar_examples() {
        let t = index_two();
        let empty = Graphing::empty(2);
        assert_eq!(empty.bar(&t).unwrap(), Graphing::identity(2));
        let a = Word::generator(0);
        let m = Graphing::from_incidences(2, [(0, a.clone())]).unwrap();
        let b = m.bar(&t).unwrap();
        assert!(b.contains(1, &a.inverse()));
        assert_eq!(b.edge_measure(), Fraction::from_integer(2));
        assert_eq!(b.bar(&t).unwrap(), b);
    }

    #[test]
    fn compose_examples() {
        let t = index_two();
        let a = Word::generator(0);
        let b = Word::generator(1);
        let m = Graphing::from_incidences(2, [(0, a.clone())]).unwrap();
        let i = Graphing::identity(2);
        assert_eq!(i.compose(&m, &t, 64).unwrap(), m);
        assert_eq!(m.compose(&i, &t, 64).unwrap(), m);
        let n = Graphing::from_incidences(2, [(1, b.clone()), (1, a.inverse())]).unwrap();
        let mn = m.compose(&n, &t, 64).unwrap();
        assert!(mn.contains(0, &a.concat(&b)));
        assert!(mn.contains(0, &Word::identity()));
        let long = Graphing::from_incidences(2, [(0, a.pow(40))]).unwrap();
        assert!(matches!(long.compose(&long, &t, 64), Err(GraphingError::LabelTooLong { len: 80, .. })));
    }

    #[test]
    fn power_one_is_bar() {
        let t = index_two();
        let m = Graphing::from_incidences(2, [(0, Word::generator(1)), (1, Word::generator(0))]).unwrap();
        assert_eq!(m.power(1, &t, 64).unwrap(), m.bar(&t).unwrap());
        let p2 = m.power(2, &t, 64).unwrap().projected(&t).unwrap();
        assert!(m.power(1, &t, 64).unwrap().projected(&t).unwrap().is_subset(&p2));
    }
}
