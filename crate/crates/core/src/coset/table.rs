use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Letter, Presentation, SubgroupSpec, Word};

pub(crate) const UNDEF: u32 = u32::MAX;

/// How a table came to be.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Enumerated from (or known to be the table of) this subgroup spec.
    Spec { spec: SubgroupSpec },
    /// Produced by some other construction, described by the tag.
    Derived { tag: String },
}

/// A complete, transitive right action of the generators on the cosets of
/// a finite-index subgroup. Coset 0 is the subgroup itself.
///
/// The table does not hold its ambient presentation; operations that need it
/// take it as an argument.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct CosetTable {
    index: usize,
    ngens: usize,
    /// `cols[letter.column()][c]` is `c · letter`.
    cols: Vec<Vec<u32>>,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    index: usize,
    /// One permutation per generator, in image form.
    generators: Vec<Vec<u32>>,
    provenance: Provenance,
}

impl From<CosetTable> for TableRepr {
    fn from(t: CosetTable) -> Self {
        let generators = (0..t.ngens).map(|g| t.cols[2 * g].clone()).collect();
        TableRepr { index: t.index, generators, provenance: t.provenance }
    }
}

impl TryFrom<TableRepr> for CosetTable {
    type Error = TableError;
    fn try_from(r: TableRepr) -> Result<Self, TableError> {
        let t = CosetTable::from_perms(r.generators.into_iter().map(|p| p.into_iter().map(|x| x as usize).collect()).collect(), r.provenance)?;
        if t.index != r.index {
            return Err(TableError::Size);
        }
        Ok(t)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("a table needs at least one coset")]
    Empty,
    #[error("generator permutations have inconsistent sizes")]
    Size,
    #[error("generator {0} does not act as a permutation")]
    NotBijection(usize),
}

/// A violated table invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NotBijection { generator: usize },
    NotTransitive { reachable: usize, index: usize },
    RelatorNotIdentity { relator: usize, coset: usize },
    SubgroupGeneratorMovesBase { generator: usize, image: usize },
    GeneratorCountMismatch { table: usize, presentation: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotBijection { generator } => write!(f, "bijection: generator {generator} is not a permutation"),
            Violation::NotTransitive { reachable, index } => {
                write!(f, "transitivity: only {reachable} of {index} cosets reachable from coset 0")
            }
            Violation::RelatorNotIdentity { relator, coset } => {
                write!(f, "relators: relator {relator} moves coset {coset}")
            }
            Violation::SubgroupGeneratorMovesBase { generator, image } => {
                write!(f, "subgroup: defining generator {generator} sends coset 0 to {image}")
            }
            Violation::GeneratorCountMismatch { table, presentation } => {
                write!(f, "table has {table} generators, presentation has {presentation}")
            }
        }
    }
}

impl CosetTable {
    /// Build from generator permutations in image form (`perms[g][c] = c·g`).
    /// The result is not checked for transitivity or relators; see
    /// [`CosetTable::validate`].
    pub fn from_perms(perms: Vec<Vec<usize>>, provenance: Provenance) -> Result<Self, TableError> {
        let index = perms.first().map(Vec::len).ok_or(TableError::Size)?;
        if index == 0 {
            return Err(TableError::Empty);
        }
        let ngens = perms.len();
        let mut cols = Vec::with_capacity(2 * ngens);
        for (g, p) in perms.iter().enumerate() {
            if p.len() != index {
                return Err(TableError::Size);
            }
            let mut inv = vec![UNDEF; index];
            for (c, &img) in p.iter().enumerate() {
                if img >= index || inv[img] != UNDEF {
                    return Err(TableError::NotBijection(g));
                }
                inv[img] = c as u32;
            }
            cols.push(p.iter().map(|&x| x as u32).collect());
            cols.push(inv);
        }
        Ok(CosetTable { index, ngens, cols, provenance })
    }

    /// Trusted constructor from complete columns.
    pub(crate) fn from_cols(ngens: usize, cols: Vec<Vec<u32>>, provenance: Provenance) -> Self {
        let index = cols[0].len();
        debug_assert_eq!(cols.len(), 2 * ngens);
        CosetTable { index, ngens, cols, provenance }
    }

    /// The one-coset table of the whole group.
    pub fn trivial(ngens: usize) -> Self {
        CosetTable { index: 1, ngens, cols: vec![vec![0]; 2 * ngens], provenance: Provenance::Derived { tag: "whole group".into() } }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// The defining spec, when the provenance records one.
    pub fn defining_spec(&self) -> Option<&SubgroupSpec> {
        match &self.provenance {
            Provenance::Spec { spec } => Some(spec),
            Provenance::Derived { .. } => None,
        }
    }

    /// Image form of generator `g`.
    pub fn perm(&self, g: usize) -> &[u32] {
        &self.cols[2 * g]
    }

    #[inline]
    pub fn act(&self, c: usize, l: Letter) -> usize {
        self.cols[l.column()][c] as usize
    }

    #[inline]
    pub fn act_col(&self, c: usize, col: usize) -> usize {
        self.cols[col][c] as usize
    }

    pub fn act_word(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.act(c, l))
    }

    /// The permutation of cosets induced by `w`, in image form.
    pub fn coset_action(&self, w: &Word) -> Vec<usize> {
        (0..self.index).map(|c| self.act_word(c, w)).collect()
    }

    /// Membership in the subgroup: `w` fixes coset 0.
    pub fn contains(&self, w: &Word) -> bool {
        self.act_word(0, w) == 0
    }

    /// Number of cosets fixed by `w`.
    pub fn fixed_points(&self, w: &Word) -> usize {
        (0..self.index).filter(|&c| self.act_word(c, w) == c).count()
    }

    /// Relabel cosets in order of first appearance along a breadth-first
    /// walk from coset 0 that tries columns in order `g0, g0⁻¹, g1, …`.
    /// Cosets unreachable from 0 are dropped.
    pub fn standardized(&self) -> CosetTable {
        let (order, _) = self.bfs_order();
        let mut relabel = vec![UNDEF; self.index];
        for (i, &c) in order.iter().enumerate() {
            relabel[c] = i as u32;
        }
        let cols = self
            .cols
            .iter()
            .map(|col| order.iter().map(|&c| relabel[col[c] as usize]).collect())
            .collect();
        CosetTable { index: order.len(), ngens: self.ngens, cols, provenance: self.provenance.clone() }
    }

    pub fn is_standard(&self) -> bool {
        let (order, _) = self.bfs_order();
        order.len() == self.index && order.iter().enumerate().all(|(i, &c)| i == c)
    }

    /// Breadth-first order from coset 0, with the tree edge used to reach
    /// each coset (`None` for coset 0).
    pub(crate) fn bfs_order(&self) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
        let mut seen = vec![false; self.index];
        let mut parent = vec![None; self.index];
        let mut order = Vec::with_capacity(self.index);
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0usize);
        while let Some(c) = queue.pop_front() {
            order.push(c);
            for (col, column) in self.cols.iter().enumerate() {
                let d = column[c] as usize;
                if d < self.index && !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((c, col));
                    queue.push_back(d);
                }
            }
        }
        (order, parent)
    }

    /// Whether the subgroup is normal: for every coset `c` there is a
    /// graph automorphism of the action taking 0 to `c`.
    pub fn is_normal(&self) -> bool {
        let (order, parent) = self.bfs_order();
        let mut image = vec![0usize; self.index];
        'target: for c in 0..self.index {
            image[0] = c;
            for &x in order.iter().skip(1) {
                let (p, col) = parent[x].unwrap();
                image[x] = self.act_col(image[p], col);
            }
            for col in 0..2 * self.ngens {
                for x in 0..self.index {
                    if image[self.act_col(x, col)] != self.act_col(image[x], col) {
                        return false;
                    }
                }
            }
            continue 'target;
        }
        true
    }

    /// Flattened generator columns, used as a canonical sort key for
    /// standardized tables.
    pub fn canonical_key(&self) -> Vec<u32> {
        let mut key = Vec::with_capacity(self.index * self.ngens);
        for c in 0..self.index {
            for g in 0..self.ngens {
                key.push(self.cols[2 * g][c]);
            }
        }
        key
    }

    /// Check the table invariants against `p` and, when present, the
    /// defining spec recorded in the provenance.
    pub fn validate(&self, p: &Presentation) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.ngens != p.ngens() {
            out.push(Violation::GeneratorCountMismatch { table: self.ngens, presentation: p.ngens() });
            return out;
        }
        let mut bijective = true;
        for g in 0..self.ngens {
            let fwd = &self.cols[2 * g];
            let inv = &self.cols[2 * g + 1];
            let mut hit = vec![false; self.index];
            let mut ok = true;
            for c in 0..self.index {
                let d = fwd[c] as usize;
                if d >= self.index || hit[d] || inv[d] as usize != c {
                    ok = false;
                    break;
                }
                hit[d] = true;
            }
            if !ok {
                bijective = false;
                out.push(Violation::NotBijection { generator: g });
            }
        }
        if !bijective {
            return out;
        }
        let (order, _) = self.bfs_order();
        if order.len() != self.index {
            out.push(Violation::NotTransitive { reachable: order.len(), index: self.index });
        }
        for (i, r) in p.relators().iter().enumerate() {
            if let Some(c) = (0..self.index).find(|&c| self.act_word(c, r) != c) {
                out.push(Violation::RelatorNotIdentity { relator: i, coset: c });
            }
        }
        if let Some(spec) = self.defining_spec() {
            for (i, w) in spec.generators.iter().enumerate() {
                // for a normal closure the generators fix every coset
                let cosets: Vec<usize> = if spec.normal { (0..self.index).collect() } else { vec![0] };
                for c in cosets {
                    let img = self.act_word(c, w);
                    if img != c {
                        out.push(Violation::SubgroupGeneratorMovesBase { generator: i, image: img });
                        break;
                    }
                }
            }
        }
        out
    }

    /// Corrupt one entry in place (both directions stay consistent with the
    /// forward column only). Exists for tests of [`CosetTable::validate`].
    #[doc(hidden)]
    pub fn set_entry_unchecked(&mut self, g: usize, c: usize, target: usize) {
        self.cols[2 * g][c] = target as u32;
    }
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetTable")
            .field("index", &self.index)
            .field("generators", &(0..self.ngens).map(|g| &self.cols[2 * g]).collect::<Vec<_>>())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_presentation;

    fn cyclic(n: usize) -> CosetTable {
        CosetTable::from_perms(vec![(0..n).map(|c| (c + 1) % n).collect()], Provenance::Derived { tag: "test".into() }).unwrap()
    }

    #[test]
    fn five_cycle_action() {
        let t = cyclic(5);
        assert_eq!(t.coset_action(&Word::generator(0)), vec![1, 2, 3, 4, 0]);
        assert!(t.contains(&Word::power_of(0, 5)));
        assert!(!t.contains(&Word::power_of(0, 3)));
        assert!(t.is_normal());
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let p = parse_presentation("gens t\n").unwrap().presentation;
        let mut t = cyclic(5);
        assert!(t.validate(&p).is_empty());
        t.set_entry_unchecked(0, 2, 4);
        let v = t.validate(&p);
        assert!(matches!(v[0], Violation::NotBijection { generator: 0 }));
        assert!(v[0].to_string().starts_with("bijection"));
    }

    #[test]
    fn intransitive_table_is_reported() {
        let p = parse_presentation("gens t\n").unwrap().presentation;
        let t = CosetTable::from_perms(vec![vec![1, 0, 3, 2]], Provenance::Derived { tag: "x".into() }).unwrap();
        let v = t.validate(&p);
        assert_eq!(v, vec![Violation::NotTransitive { reachable: 2, index: 4 }]);
    }

    #[test]
    fn relator_violation_is_reported() {
        let p = parse_presentation("gens t\nrel t^2\n").unwrap().presentation;
        let v = cyclic(3).validate(&p);
        assert!(matches!(v[0], Violation::RelatorNotIdentity { relator: 0, .. }));
    }

    #[test]
    fn standardize_relabels_bfs() {
        let t = CosetTable::from_perms(vec![vec![2, 0, 1]], Provenance::Derived { tag: "x".into() }).unwrap();
        assert!(!t.is_standard());
        let s = t.standardized();
        assert!(s.is_standard());
        assert_eq!(s.perm(0), &[1, 2, 0]);
    }

    #[test]
    fn serde_round_trip() {
        let t = cyclic(4);
        let json = serde_json::to_string(&t).unwrap();
        let back: CosetTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let bad = json.replace("[1,2,3,0]", "[1,1,3,0]");
        assert!(serde_json::from_str::<CosetTable>(&bad).is_err());
    }
}
