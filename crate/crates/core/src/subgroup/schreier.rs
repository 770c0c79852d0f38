use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::words::{Letter, Presentation, Word};

/// Schreier transversal and generators of the subgroup of a coset table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierData {
    /// `transversal[c]` maps coset 0 to coset `c`; `transversal[0]` is empty.
    pub transversal: Vec<Word>,
    /// Tree edge `(parent coset, letter)` used to reach each coset.
    pub parent: Vec<Option<(usize, Letter)>>,
    /// Nontrivial Schreier generators `t_c · g · t_{c·g}⁻¹`, one per
    /// non-tree edge, ordered by coset then generator.
    pub generators: Vec<Word>,
    /// The `(coset, generator)` edge behind each entry of `generators`.
    pub edges: Vec<(usize, usize)>,
}

impl SchreierData {
    /// Position in `generators` of the edge `c --g--> c·g`, or `None` for a
    /// tree edge.
    pub fn generator_index(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.transversal.len();
        let ngens = self.edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
        let mut idx = vec![vec![None; ngens]; n];
        for (i, &(c, g)) in self.edges.iter().enumerate() {
            idx[c][g] = Some(i);
        }
        idx
    }
}

/// Breadth-first spanning tree from coset 0, columns in order
/// `g0, g0⁻¹, g1, …`, and the Schreier generators of its non-tree edges.
pub fn schreier_generators(t: &CosetTable) -> SchreierData {
    let (order, bfs_parent) = t.bfs_order();
    let n = t.index();
    let parent: Vec<Option<(usize, Letter)>> = bfs_parent.iter().map(|p| p.map(|(c, col)| (c, Letter::from_column(col)))).collect();
    let mut transversal = vec![Word::identity(); n];
    for &c in order.iter().skip(1) {
        let (p, l) = parent[c].unwrap();
        let mut letters = transversal[p].letters().to_vec();
        letters.push(l);
        transversal[c] = Word::from_letters(letters);
    }
    let is_tree = |c: usize, g: usize, d: usize| parent[d] == Some((c, Letter::pos(g))) || parent[c] == Some((d, Letter::neg(g)));
    let mut generators = Vec::new();
    let mut edges = Vec::new();
    for c in 0..n {
        for g in 0..t.ngens() {
            let d = t.act(c, Letter::pos(g));
            if is_tree(c, g, d) {
                continue;
            }
            generators.push(transversal[c].concat(&Word::generator(g)).concat(&transversal[d].inverse()));
            edges.push((c, g));
        }
    }
    SchreierData { transversal, parent, generators, edges }
}

/// A presentation of a subgroup together with the ambient word each of its
/// generators stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupPresentation {
    pub presentation: Presentation,
    pub generator_words: Vec<Word>,
}

/// Reidemeister–Schreier: rewrite every relator at every coset into the
/// Schreier generators. Yields `index · #relators` relators (trivial ones
/// included) on the Schreier generators.
pub fn rewrite_presentation(p: &Presentation, t: &CosetTable) -> SubgroupPresentation {
    let data = schreier_generators(t);
    let gid = data.generator_index();
    let names: Vec<String> = (0..data.generators.len()).map(|i| format!("x{i}")).collect();
    let mut relators = Vec::with_capacity(t.index() * p.relators().len());
    for r in p.relators() {
        for c in 0..t.index() {
            let mut out = Vec::new();
            let mut x = c;
            for &l in r.letters() {
                let y = t.act(x, l);
                let g = l.gen();
                if l.inverse {
                    if let Some(i) = gid[y][g] {
                        out.push(Letter::neg(i));
                    }
                } else if let Some(i) = gid[x][g] {
                    out.push(Letter::pos(i));
                }
                x = y;
            }
            relators.push(Word::from_letters(out));
        }
    }
    let presentation = Presentation::new(names, relators).expect("generated names are valid identifiers");
    SubgroupPresentation { presentation, generator_words: data.generators }
}
