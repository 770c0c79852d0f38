//! Tietze simplification of presentations.
//!
//! Levels: 0 deletes trivial and duplicate relators; 1 additionally
//! eliminates generators occurring exactly once in some relator; 2
//! additionally shortens relators by substituting long common pieces of
//! other relators. Rules are applied in a fixed order, so results are
//! deterministic.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use super::schreier::SubgroupPresentation;
use crate::words::{Letter, Presentation, Word};

/// Relators longer than this are left alone by length-reducing substitution.
pub const SUBSTITUTION_LENGTH_CAP: usize = 10_000;
/// Eliminations that would push the total relator length above this are
/// skipped.
pub const TOTAL_LENGTH_CAP: usize = 1_000_000;
/// Substitution passes are quadratic in the relator count; above this many
/// relators they are skipped.
const SUBSTITUTION_RELATOR_CAP: usize = 400;
const SUBSTITUTION_PASSES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum TietzeLevel {
    TrivialOnly = 0,
    Eliminate = 1,
    Substitute = 2,
}

impl TietzeLevel {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            0 => Some(TietzeLevel::TrivialOnly),
            1 => Some(TietzeLevel::Eliminate),
            2 => Some(TietzeLevel::Substitute),
            _ => None,
        }
    }
}

impl Default for TietzeLevel {
    fn default() -> Self {
        TietzeLevel::Substitute
    }
}

struct Work {
    alive: Vec<bool>,
    rels: Vec<Option<Word>>,
    occ: Vec<BTreeSet<usize>>,
    total: usize,
}

impl Work {
    fn new(ngens: usize, relators: &[Word]) -> Self {
        let mut w = Work { alive: vec![true; ngens], rels: Vec::new(), occ: vec![BTreeSet::new(); ngens], total: 0 };
        for r in relators {
            w.push(r.cyclically_reduced());
        }
        w
    }

    fn push(&mut self, r: Word) {
        let id = self.rels.len();
        for l in r.letters() {
            self.occ[l.gen()].insert(id);
        }
        self.total += r.len();
        self.rels.push(Some(r));
    }

    fn replace(&mut self, id: usize, new: Word) {
        let old = self.rels[id].take().unwrap();
        self.total -= old.len();
        for l in old.letters() {
            self.occ[l.gen()].remove(&id);
        }
        for l in new.letters() {
            self.occ[l.gen()].insert(id);
        }
        self.total += new.len();
        self.rels[id] = Some(new);
    }

    fn remove(&mut self, id: usize) {
        if let Some(old) = self.rels[id].take() {
            self.total -= old.len();
            for l in old.letters() {
                self.occ[l.gen()].remove(&id);
            }
        }
    }

    /// Drop empty relators and relators that repeat another one up to
    /// cyclic permutation and inversion.
    fn remove_trivial(&mut self) -> bool {
        let mut seen = HashSet::new();
        let mut changed = false;
        for id in 0..self.rels.len() {
            let Some(r) = &self.rels[id] else { continue };
            if r.is_identity() || !seen.insert(cyclic_key(r)) {
                self.remove(id);
                changed = true;
            }
        }
        changed
    }

    /// Eliminate generators that occur exactly once in a relator, shortest
    /// relators first.
    fn eliminate(&mut self) -> bool {
        let mut changed = false;
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = self
            .rels
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| Reverse((r.len(), i))))
            .collect();
        while let Some(Reverse((len, id))) = heap.pop() {
            let Some(r) = &self.rels[id] else { continue };
            if r.len() != len {
                continue;
            }
            let Some((pos, x)) = single_occurrence(r) else { continue };
            let value = solve(r, pos);
            let growth: usize = self.occ[x.gen()]
                .iter()
                .filter(|&&k| k != id)
                .map(|&k| {
                    let n = self.rels[k].as_ref().unwrap().letters().iter().filter(|l| l.gen == x.gen).count();
                    n * value.len().saturating_sub(1)
                })
                .sum();
            if self.total + growth > TOTAL_LENGTH_CAP {
                continue;
            }
            self.remove(id);
            let affected: Vec<usize> = self.occ[x.gen()].iter().copied().collect();
            for k in affected {
                let new = substitute(self.rels[k].as_ref().unwrap(), x.gen(), &value).cyclically_reduced();
                let n = new.len();
                self.replace(k, new);
                heap.push(Reverse((n, k)));
            }
            self.alive[x.gen()] = false;
            changed = true;
        }
        changed
    }

    /// Replace a piece of a relator that covers more than half of another
    /// (shorter) relator by the inverse of the rest of that relator.
    fn shorten(&mut self) -> bool {
        let live: Vec<usize> = (0..self.rels.len()).filter(|&i| self.rels[i].is_some()).collect();
        if live.len() > SUBSTITUTION_RELATOR_CAP {
            return false;
        }
        let mut changed = false;
        let mut order = live.clone();
        order.sort_by_key(|&i| (self.rels[i].as_ref().unwrap().len(), i));
        for &s_id in &order {
            for &r_id in &order {
                if s_id == r_id {
                    continue;
                }
                let (Some(s), Some(r)) = (&self.rels[s_id], &self.rels[r_id]) else { continue };
                if s.len() > r.len() || r.len() > SUBSTITUTION_LENGTH_CAP || s.is_identity() {
                    continue;
                }
                if let Some(new) = shorten_with(r, s) {
                    self.replace(r_id, new);
                    changed = true;
                }
            }
        }
        changed
    }
}

/// Canonical representative of a relator up to rotation and inversion.
fn cyclic_key(r: &Word) -> Vec<Letter> {
    let mut best: Option<Vec<Letter>> = None;
    for w in [r.clone(), r.inverse()] {
        for k in 0..w.len().max(1) {
            let rot = w.rotate(k).into_letters();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// First letter (by generator index) whose generator occurs once.
fn single_occurrence(r: &Word) -> Option<(usize, Letter)> {
    let mut count: std::collections::BTreeMap<u32, (usize, usize)> = std::collections::BTreeMap::new();
    for (i, l) in r.letters().iter().enumerate() {
        let e = count.entry(l.gen).or_insert((0, i));
        e.0 += 1;
    }
    count.into_iter().find(|(_, (n, _))| *n == 1).map(|(_, (_, i))| (i, r.letters()[i]))
}

/// Value of the letter at `pos` forced by `r = 1`, as a word in the other
/// letters of `r`, expressed for the positive generator.
fn solve(r: &Word, pos: usize) -> Word {
    let l = r.letters();
    let u = Word::from_letters(l[..pos].iter().copied());
    let v = Word::from_letters(l[pos + 1..].iter().copied());
    // u x v = 1  ⇒  x = u⁻¹ v⁻¹ ; u x⁻¹ v = 1 ⇒ x = v u
    if l[pos].inverse {
        v.concat(&u)
    } else {
        u.inverse().concat(&v.inverse())
    }
}

fn substitute(r: &Word, gen: usize, value: &Word) -> Word {
    let inv = value.inverse();
    let mut out = Vec::with_capacity(r.len());
    for &l in r.letters() {
        if l.gen() == gen {
            out.extend_from_slice(if l.inverse { inv.letters() } else { value.letters() });
        } else {
            out.push(l);
        }
    }
    Word::from_letters(out)
}

/// If some cyclic piece of `r` agrees with more than half of a rotation of
/// `s` or `s⁻¹`, replace it by the inverse of the remainder.
fn shorten_with(r: &Word, s: &Word) -> Option<Word> {
    let rl = r.letters();
    let n = rl.len();
    let m = s.len();
    if n == 0 {
        return None;
    }
    let mut best: Option<(usize, usize, Vec<Letter>)> = None;
    for cand in [s.clone(), s.inverse()] {
        for k in 0..m {
            let rot = cand.rotate(k);
            let sl = rot.letters();
            for start in 0..n {
                let mut len = 0;
                while len < m && len < n && rl[(start + len) % n] == sl[len] {
                    len += 1;
                }
                if 2 * len > m && best.as_ref().is_none_or(|b| len > b.0) {
                    best = Some((len, start, sl.to_vec()));
                }
            }
        }
    }
    let (len, start, sl) = best?;
    // r rotated to begin at `start` is  P · rest ; P = (sl[len..])⁻¹
    let mut letters = Vec::with_capacity(n - len + m - len);
    letters.extend(sl[len..].iter().rev().map(|l| l.inv()));
    for i in len..n {
        letters.push(rl[(start + i) % n]);
    }
    let out = Word::from_letters(letters).cyclically_reduced();
    (out.len() < n).then_some(out)
}

/// Simplify a presentation; see the module documentation for the levels.
pub fn tietze_simplify(p: &Presentation, level: TietzeLevel) -> Presentation {
    let words: Vec<Word> = (0..p.ngens()).map(Word::generator).collect();
    let sp = SubgroupPresentation { presentation: p.clone(), generator_words: words };
    let out = tietze_simplify_tracked(&sp, level);
    out.presentation
}

/// As [`tietze_simplify`], keeping the ambient words of surviving
/// generators. Surviving generators keep their names.
pub fn tietze_simplify_tracked(sp: &SubgroupPresentation, level: TietzeLevel) -> SubgroupPresentation {
    let p = &sp.presentation;
    let mut w = Work::new(p.ngens(), p.relators());
    w.remove_trivial();
    if level >= TietzeLevel::Eliminate {
        w.eliminate();
        w.remove_trivial();
    }
    if level >= TietzeLevel::Substitute {
        for _ in 0..SUBSTITUTION_PASSES {
            if !w.shorten() {
                break;
            }
            w.remove_trivial();
            w.eliminate();
            w.remove_trivial();
        }
    }
    let survivors: Vec<usize> = (0..p.ngens()).filter(|&g| w.alive[g]).collect();
    let mut relabel = vec![usize::MAX; p.ngens()];
    for (i, &g) in survivors.iter().enumerate() {
        relabel[g] = i;
    }
    let rels: Vec<Word> = w
        .rels
        .into_iter()
        .flatten()
        .map(|r| Word::from_letters(r.letters().iter().map(|l| Letter::new(relabel[l.gen()], l.inverse))))
        .collect();
    let names: Vec<String> = survivors.iter().map(|&g| p.names()[g].clone()).collect();
    let presentation = Presentation::new(names, rels).expect("relabeling keeps generators in range");
    let generator_words = survivors.iter().map(|&g| sp.generator_words[g].clone()).collect();
    SubgroupPresentation { presentation, generator_words }
}
