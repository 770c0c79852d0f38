//! All subgroups of index at most `n` by backtracking over partial coset
//! tables.
//!
//! The search always fills the first undefined entry in row-major order and
//! numbers a new coset by the next free label, so every complete table it
//! reaches is standardized and each subgroup appears exactly once.

use thiserror::Error;

use super::table::{CosetTable, Provenance, UNDEF};
use crate::words::{Presentation, Word};

/// Default cap on search-tree nodes.
pub const DEFAULT_NODE_CAP: usize = 50_000_000;

#[derive(Debug, Clone, Error)]
pub enum LowIndexError {
    #[error("low-index search exceeded {nodes} nodes; {} subgroups found before stopping", partial.len())]
    Budget { nodes: usize, partial: Vec<CosetTable> },
}

#[derive(Clone)]
struct Partial {
    ncols: usize,
    n: usize,
    table: Vec<u32>,
}

impl Partial {
    #[inline]
    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: usize, v: u32) {
        self.table[c * self.ncols + x] = v;
    }

    /// Assign `c·x = d` and its inverse entry; false on a clash.
    fn assign(&mut self, c: usize, x: usize, d: usize) -> bool {
        let cur = self.get(c, x);
        let back = self.get(d, x ^ 1);
        if cur != UNDEF && cur as usize != d {
            return false;
        }
        if back != UNDEF && back as usize != c {
            return false;
        }
        self.set(c, x, d as u32);
        self.set(d, x ^ 1, c as u32);
        true
    }

    /// Scan every relator from every coset, deducing single missing entries,
    /// until nothing changes. Returns false on a contradiction.
    fn close(&mut self, rels: &[Vec<usize>]) -> bool {
        loop {
            let mut changed = false;
            for c in 0..self.n {
                for r in rels {
                    match self.scan(c, r) {
                        Scan::Conflict => return false,
                        Scan::Deduced => changed = true,
                        Scan::Open | Scan::Closed => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn scan(&mut self, alpha: usize, w: &[usize]) -> Scan {
        let mut f = alpha;
        let mut i = 0;
        while i < w.len() {
            let n = self.get(f, w[i]);
            if n == UNDEF {
                break;
            }
            f = n as usize;
            i += 1;
        }
        if i == w.len() {
            return if f == alpha { Scan::Closed } else { Scan::Conflict };
        }
        let mut b = alpha;
        let mut j = w.len();
        while j > i {
            let n = self.get(b, w[j - 1] ^ 1);
            if n == UNDEF {
                break;
            }
            b = n as usize;
            j -= 1;
        }
        if j == i {
            return if f == b { Scan::Closed } else { Scan::Conflict };
        }
        if j == i + 1 {
            return if self.assign(f, w[i], b) { Scan::Deduced } else { Scan::Conflict };
        }
        Scan::Open
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        for c in 0..self.n {
            for x in 0..self.ncols {
                if self.get(c, x) == UNDEF {
                    return Some((c, x));
                }
            }
        }
        None
    }
}

enum Scan {
    Closed,
    Open,
    Deduced,
    Conflict,
}

struct Search<'a> {
    rels: &'a [Vec<usize>],
    ngens: usize,
    nmax: usize,
    nodes: usize,
    node_cap: usize,
    found: Vec<CosetTable>,
}

impl Search<'_> {
    fn run(&mut self, state: Partial) -> Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(());
        }
        let Some((c, x)) = state.first_undefined() else {
            let cols = (0..state.ncols).map(|x| (0..state.n).map(|c| state.get(c, x)).collect()).collect();
            self.found.push(CosetTable::from_cols(self.ngens, cols, Provenance::Derived { tag: "low-index".into() }));
            return Ok(());
        };
        for d in 0..state.n {
            if state.get(d, x ^ 1) != UNDEF {
                continue;
            }
            let mut next = state.clone();
            if next.assign(c, x, d) && next.close(self.rels) {
                self.run(next)?;
            }
        }
        if state.n < self.nmax {
            let mut next = state;
            let d = next.n;
            next.n += 1;
            if next.assign(c, x, d) && next.close(self.rels) {
                self.run(next)?;
            }
        }
        Ok(())
    }
}

/// Every subgroup of index at most `nmax`, one standardized table each,
/// sorted by index and then by table entries.
pub fn low_index(p: &Presentation, nmax: usize, node_cap: usize) -> Result<Vec<CosetTable>, LowIndexError> {
    let nmax = nmax.max(1);
    let ncols = 2 * p.ngens();
    let rels: Vec<Vec<usize>> = p.relators().iter().map(Word::columns).collect();
    let mut search = Search { rels: &rels, ngens: p.ngens(), nmax, nodes: 0, node_cap, found: Vec::new() };
    let mut start = Partial { ncols, n: 1, table: vec![UNDEF; ncols * nmax] };
    let ok = start.close(&rels);
    let outcome = if ok { search.run(start) } else { Ok(()) };
    let mut found = std::mem::take(&mut search.found);
    found.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.canonical_key().cmp(&b.canonical_key())));
    match outcome {
        Ok(()) => Ok(found),
        Err(()) => Err(LowIndexError::Budget { nodes: node_cap, partial: found }),
    }
}

/// Per-index subgroup counts `[#index 1, #index 2, …, #index nmax]`.
pub fn counts_by_index(tables: &[CosetTable], nmax: usize) -> Vec<usize> {
    let mut counts = vec![0; nmax];
    for t in tables {
        if t.index() <= nmax {
            counts[t.index() - 1] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_presentation;

    fn pres(text: &str) -> Presentation {
        parse_presentation(text).unwrap().presentation
    }

    /// Hall's recursion for the number of index-n subgroups of F_r.
    fn hall(r: u32, nmax: usize) -> Vec<u128> {
        let fact: Vec<u128> = (0..=nmax as u128).scan(1u128, |f, k| {
            if k > 0 {
                *f *= k;
            }
            Some(*f)
        }).collect();
        let mut a = vec![0u128; nmax + 1];
        for n in 1..=nmax {
            let mut v = n as u128 * fact[n].pow(r - 1);
            for k in 1..n {
                v -= fact[n - k].pow(r - 1) * a[k];
            }
            a[n] = v;
        }
        a[1..].to_vec()
    }

    #[test]
    fn hall_numbers() {
        assert_eq!(hall(2, 5), vec![1, 3, 13, 71, 461]);
        assert_eq!(hall(3, 3), vec![1, 7, 97]);
    }

    #[test]
    fn free_group_counts_match_hall() {
        let p = pres("gens a b\n");
        let tables = low_index(&p, 4, DEFAULT_NODE_CAP).unwrap();
        let counts: Vec<u128> = counts_by_index(&tables, 4).into_iter().map(|c| c as u128).collect();
        assert_eq!(counts, hall(2, 4));
        for t in &tables {
            assert!(t.validate(&p).is_empty());
            assert!(t.is_standard());
        }
        let p3 = pres("gens a b c\n");
        let counts: Vec<u128> = counts_by_index(&low_index(&p3, 3, DEFAULT_NODE_CAP).unwrap(), 3).into_iter().map(|c| c as u128).collect();
        assert_eq!(counts, hall(3, 3));
    }

    #[test]
    fn integers_have_one_subgroup_per_index() {
        let p = pres("gens t\n");
        assert_eq!(counts_by_index(&low_index(&p, 4, DEFAULT_NODE_CAP).unwrap(), 4), vec![1, 1, 1, 1]);
    }

    #[test]
    fn symmetric_group_counts() {
        let p = pres("gens s r\nrel s^2\nrel r^3\nrel s r s r\n");
        let tables = low_index(&p, 6, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(counts_by_index(&tables, 6), vec![1, 1, 3, 0, 0, 1]);
        for t in &tables {
            assert!(t.validate(&p).is_empty());
        }
    }

    #[test]
    fn node_cap_gives_partial_result() {
        let p = pres("gens a b\n");
        match low_index(&p, 5, 100) {
            Err(LowIndexError::Budget { partial, .. }) => assert!(!partial.is_empty()),
            Ok(_) => panic!("expected budget error"),
        }
    }

    #[test]
    fn cyclic_reduction_preserves_counts() {
        let a = pres("gens a b\nrel a^2\nrel b^3\n");
        let b = pres("gens a b\nrel b a^2 b^-1\nrel a b^3 a^-1\n");
        assert_eq!(
            counts_by_index(&low_index(&a, 6, DEFAULT_NODE_CAP).unwrap(), 6),
            counts_by_index(&low_index(&b, 6, DEFAULT_NODE_CAP).unwrap(), 6)
        );
    }
}
