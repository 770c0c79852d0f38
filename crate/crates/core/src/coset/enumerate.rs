//! HLT coset enumeration with coincidence processing and a lookahead pass
//! when the live-coset budget is reached.

use thiserror::Error;

use super::table::{CosetTable, Provenance, UNDEF};
use crate::words::{Presentation, SubgroupSpec, Word};

/// Default live-coset budget.
pub const DEFAULT_COSET_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("coset enumeration did not complete within {0} live cosets")]
    IndexBoundExceeded(usize),
    #[error("subgroup generator references a generator outside the presentation")]
    BadGenerator,
}

struct Full;

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    cap: usize,
    alloc_limit: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn new(ngens: usize, cap: usize) -> Self {
        let ncols = 2 * ngens;
        Enumerator {
            ncols,
            table: vec![UNDEF; ncols],
            parent: vec![0],
            live: 1,
            cap,
            alloc_limit: cap.saturating_mul(16).max(1 << 16),
            queue: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.ncols + x] = v;
    }

    fn allocated(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn define(&mut self, c: u32, x: usize) -> Result<(), Full> {
        if self.live >= self.cap || self.allocated() >= self.alloc_limit {
            return Err(Full);
        }
        let d = self.allocated() as u32;
        self.table.extend(std::iter::repeat(UNDEF).take(self.ncols));
        self.parent.push(d);
        self.live += 1;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(())
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill as usize] = keep;
        self.live -= 1;
        self.queue.push(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                self.set(f, x ^ 1, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != UNDEF {
                    self.merge(f1, ex);
                } else {
                    let fx = self.get(f1, x ^ 1);
                    if fx != UNDEF {
                        self.merge(e1, fx);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
    }

    /// Trace `w` from `alpha` in both directions, filling gaps with new
    /// cosets when `fill` is set and only deducing otherwise.
    fn scan(&mut self, alpha: u32, w: &[usize], fill: bool) -> Result<(), Full> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = w.len();
        loop {
            while i < j {
                let n = self.get(f, w[i]);
                if n == UNDEF {
                    break;
                }
                f = n;
                i += 1;
            }
            if i == j {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return Ok(());
            }
            while j > i {
                let n = self.get(b, w[j - 1] ^ 1);
                if n == UNDEF {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn lookahead(&mut self, rels: &[Vec<usize>]) {
        let mut c = 0;
        while c < self.allocated() {
            let cu = c as u32;
            for r in rels {
                if !self.is_live(cu) {
                    break;
                }
                let _ = self.scan(cu, r, false);
            }
            c += 1;
        }
    }

    /// Run `step` and, on a full table, look ahead once and retry.
    fn with_lookahead<F>(&mut self, rels: &[Vec<usize>], mut step: F) -> Result<(), EnumerateError>
    where
        F: FnMut(&mut Self) -> Result<(), Full>,
    {
        loop {
            match step(self) {
                Ok(()) => return Ok(()),
                Err(Full) => {
                    let before = self.live;
                    self.lookahead(rels);
                    if self.live >= before && (self.live >= self.cap || self.allocated() >= self.alloc_limit) {
                        return Err(EnumerateError::IndexBoundExceeded(self.cap));
                    }
                }
            }
        }
    }
}

/// Enumerate the cosets of `⟨S⟩` (or its normal closure) in the group
/// presented by `p`, with at most `cap` live cosets at any time.
///
/// The returned table is standardized (see [`CosetTable::standardized`]).
pub fn enumerate(p: &Presentation, s: &SubgroupSpec, cap: usize) -> Result<CosetTable, EnumerateError> {
    let ngens = p.ngens();
    if s.generators.iter().any(|w| w.max_generator().is_some_and(|g| g >= ngens)) {
        return Err(EnumerateError::BadGenerator);
    }
    let cap = cap.max(1);
    let mut rels: Vec<Vec<usize>> = p.relators().iter().map(Word::columns).collect();
    let mut subgens: Vec<Vec<usize>> = Vec::new();
    if s.normal {
        rels.extend(s.generators.iter().map(|w| w.cyclically_reduced().columns()).filter(|w| !w.is_empty()));
    } else {
        subgens.extend(s.generators.iter().map(Word::columns).filter(|w| !w.is_empty()));
    }
    // short relators first so cheap deductions happen early
    rels.sort_by_key(Vec::len);

    let mut e = Enumerator::new(ngens, cap);
    for w in &subgens {
        e.with_lookahead(&rels, |e| e.scan(0, w, true))?;
    }
    let mut c = 0usize;
    while c < e.allocated() {
        let cu = c as u32;
        for r in &rels {
            if !e.is_live(cu) {
                break;
            }
            e.with_lookahead(&rels, |e| e.scan(cu, r, true))?;
        }
        for x in 0..e.ncols {
            if !e.is_live(cu) {
                break;
            }
            if e.get(cu, x) == UNDEF {
                e.with_lookahead(&rels, |e| if e.get(cu, x) == UNDEF { e.define(cu, x) } else { Ok(()) })?;
            }
        }
        c += 1;
    }

    let live: Vec<u32> = (0..e.allocated() as u32).filter(|&c| e.is_live(c)).collect();
    let mut relabel = vec![UNDEF; e.allocated()];
    for (i, &c) in live.iter().enumerate() {
        relabel[c as usize] = i as u32;
    }
    let mut cols = vec![Vec::with_capacity(live.len()); e.ncols];
    for &c in &live {
        for (x, col) in cols.iter_mut().enumerate() {
            let d = e.get(c, x);
            col.push(relabel[e.rep(d) as usize]);
        }
    }
    let table = CosetTable::from_cols(ngens, cols, Provenance::Spec { spec: s.clone() });
    Ok(table.standardized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{parse_presentation, Letter};

    fn pres(text: &str) -> Presentation {
        parse_presentation(text).unwrap().presentation
    }

    fn word(p: &Presentation, s: &str) -> Word {
        p.parse_word(s).unwrap()
    }

    #[test]
    fn cyclic_quotient() {
        let p = pres("gens t\n");
        let t = enumerate(&p, &SubgroupSpec::new(vec![Word::power_of(0, 5)]), 100).unwrap();
        assert_eq!(t.index(), 5);
        let perm = t.coset_action(&Word::generator(0));
        let mut c = perm[0];
        let mut len = 1;
        while c != 0 {
            c = perm[c];
            len += 1;
        }
        assert_eq!(len, 5);
        assert!(t.validate(&p).is_empty());
    }

    /// Multiplication table of S₃ as permutations of {0,1,2}.
    fn s3_order() -> usize {
        let mut elems = vec![[0usize, 1, 2]];
        let gens = [[1usize, 0, 2], [1, 2, 0]];
        let mut i = 0;
        while i < elems.len() {
            for g in &gens {
                let e = elems[i];
                let prod = [g[e[0]], g[e[1]], g[e[2]]];
                if !elems.contains(&prod) {
                    elems.push(prod);
                }
            }
            i += 1;
        }
        elems.len()
    }

    #[test]
    fn symmetric_group_order() {
        let p = pres("gens s r\nrel s^2\nrel r^3\nrel s r s r\n");
        let t = enumerate(&p, &SubgroupSpec::trivial(), 100).unwrap();
        assert_eq!(t.index(), s3_order());
        assert!(t.validate(&p).is_empty());
        assert!(t.is_normal());
    }

    #[test]
    fn free_index_two() {
        let p = pres("gens a b\n");
        let s = SubgroupSpec::new(vec![word(&p, "a^2"), word(&p, "b"), word(&p, "a b a^-1")]);
        let t = enumerate(&p, &s, 100).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.validate(&p).is_empty());
    }

    #[test]
    fn normal_closure_flag() {
        let p = pres("gens a b\n");
        // normal closure of a, b² in F₂ has quotient ℤ/2
        let s = SubgroupSpec::normal_closure(vec![word(&p, "a"), word(&p, "b^2")]);
        let t = enumerate(&p, &s, 100).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.validate(&p).is_empty());
    }

    #[test]
    fn infinite_index_hits_cap() {
        let p = pres("gens a b\n");
        let s = SubgroupSpec::new(vec![word(&p, "a")]);
        assert_eq!(enumerate(&p, &s, 50), Err(EnumerateError::IndexBoundExceeded(50)));
    }

    #[test]
    fn tight_cap_uses_lookahead() {
        // coset 0 of ⟨s⟩ in S₃ needs lookahead to finish inside a tiny budget
        let p = pres("gens s r\nrel s^2\nrel r^3\nrel s r s r\n");
        let t = enumerate(&p, &SubgroupSpec::new(vec![Word::generator(0)]), 3);
        assert_eq!(t.map(|t| t.index()).unwrap_or(3), 3);
        let t = enumerate(&p, &SubgroupSpec::trivial(), 6).unwrap();
        assert_eq!(t.index(), 6);
    }

    #[test]
    fn figure_eight_hnn_levels() {
        let p = pres("gens a b t\nrel t^-1 a t b\nrel t^-1 b t b^-1 a^-1 b^-2\n");
        for n in 1..=6 {
            let s = SubgroupSpec::new(vec![Word::generator(0), Word::generator(1), Word::power_of(2, n)]);
            let t = enumerate(&p, &s, 10_000).unwrap();
            assert_eq!(t.index(), n as usize);
            assert!(t.validate(&p).is_empty());
            assert!(t.is_normal());
        }
    }

    #[test]
    fn larger_finite_group() {
        // (2,3,5) triangle group: A₅, order 60
        let p = pres("gens x y\nrel x^2\nrel y^3\nrel x y x y x y x y x y\n");
        let t = enumerate(&p, &SubgroupSpec::trivial(), 1000).unwrap();
        assert_eq!(t.index(), 60);
        let t = enumerate(&p, &SubgroupSpec::new(vec![Word::generator(1)]), 1000).unwrap();
        assert_eq!(t.index(), 20);
        assert!(t.contains(&Word::from_letters([Letter::neg(1)])));
    }
}
