use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::algebra::{Graphing, GraphingError};
use crate::chains::Chain;
use crate::coset::{enumerate, CosetTable};
use crate::subgroup::{schreier_generators, stallings_fold};
use crate::words::{Presentation, SubgroupSpec, Word};

/// Cosets as vertices, one directed edge `c → c·γ` per incidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub vertices: usize,
    /// `(source, target, label)` in incidence order.
    pub edges: Vec<(usize, usize, Word)>,
    pub base: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopData {
    pub graph: LabeledGraph,
    /// One word per non-tree edge in the base component, each read along
    /// the fundamental cycle from the base vertex.
    pub loop_basis: Vec<Word>,
    pub connected: bool,
    /// Vertices reachable from the base vertex.
    pub component: usize,
    /// Edge positions of the spanning tree.
    pub tree_edges: Vec<usize>,
}

/// Outcome of an L-graphing check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LCheck {
    /// The loop words generate a subgroup of this index.
    True { index: usize },
    False { reason: String },
    /// The enumeration budget ran out before a decision.
    Indeterminate { reason: String },
}

impl LCheck {
    pub fn is_true(&self) -> bool {
        matches!(self, LCheck::True { .. })
    }
}

pub fn to_labeled_graph(m: &Graphing, t: &CosetTable) -> Result<LoopData, GraphingError> {
    if t.index() != m.index() {
        return Err(GraphingError::IndexMismatch { expected: t.index(), found: m.index() });
    }
    let n = m.index();
    let edges: Vec<(usize, usize, Word)> = m.incidences().map(|(c, w)| (c, t.act_word(c, w), w.clone())).collect();
    // (neighbour, edge, traversed forward)
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    for (i, (s, d, _)) in edges.iter().enumerate() {
        adj[*s].push((*d, i, true));
        if s != d {
            adj[*d].push((*s, i, false));
        }
    }
    let mut phi: Vec<Option<Word>> = vec![None; n];
    let mut tree = vec![false; edges.len()];
    let mut queue = VecDeque::new();
    if n > 0 {
        phi[0] = Some(Word::identity());
        queue.push_back(0);
    }
    while let Some(v) = queue.pop_front() {
        for &(u, e, fwd) in &adj[v] {
            if phi[u].is_some() {
                continue;
            }
            let label = if fwd { edges[e].2.clone() } else { edges[e].2.inverse() };
            phi[u] = Some(phi[v].as_ref().unwrap().concat(&label));
            tree[e] = true;
            queue.push_back(u);
        }
    }
    let component = phi.iter().filter(|p| p.is_some()).count();
    let mut loop_basis = Vec::new();
    for (i, (s, d, w)) in edges.iter().enumerate() {
        if tree[i] {
            continue;
        }
        if let (Some(ps), Some(pd)) = (&phi[*s], &phi[*d]) {
            loop_basis.push(ps.concat(w).concat(&pd.inverse()));
        }
    }
    let tree_edges = (0..edges.len()).filter(|&i| tree[i]).collect();
    Ok(LoopData { graph: LabeledGraph { vertices: n, edges, base: 0 }, loop_basis, connected: component == n, component, tree_edges })
}

/// L-graphing check against a level table. Over a free ambient group the
/// loop subgroup is folded; otherwise it is enumerated with `cap` cosets.
pub fn check_l_graphing(m: &Graphing, ambient: &Presentation, t: &CosetTable, cap: usize) -> Result<LCheck, GraphingError> {
    let data = to_labeled_graph(m, t)?;
    if !data.connected {
        return Ok(LCheck::False { reason: format!("disconnected: {} of {} cosets reachable", data.component, t.index()) });
    }
    let spec = SubgroupSpec::new(data.loop_basis.into_iter().filter(|w| !w.is_identity()).collect());
    let found = if ambient.is_free() {
        match stallings_fold(ambient.ngens(), &spec).index {
            Some(i) => i,
            None => return Ok(LCheck::False { reason: "loop subgroup has infinite index".into() }),
        }
    } else {
        match enumerate(ambient, &spec, cap) {
            Ok(table) => table.index(),
            Err(e) => return Ok(LCheck::Indeterminate { reason: e.to_string() }),
        }
    };
    Ok(if found == t.index() {
        LCheck::True { index: found }
    } else {
        LCheck::False { reason: format!("loop subgroup has index {found}, level has index {}", t.index()) }
    })
}

pub fn is_l_graphing(m: &Graphing, chain: &Chain, n: usize, cap: usize) -> Result<LCheck, GraphingError> {
    let level = chain.level(n).ok_or(GraphingError::NoLevel(n))?;
    check_l_graphing(m, &chain.ambient, &level.table, cap)
}

/// `e(M)·index − index + 1`, the rank of the fundamental group of the
/// labeled graph.
pub fn rank_bound(m: &Graphing, chain: &Chain, n: usize, cap: usize) -> Result<usize, GraphingError> {
    match is_l_graphing(m, chain, n, cap)? {
        LCheck::True { .. } => Ok(m.incidence_count() + 1 - m.index()),
        LCheck::False { reason } => Err(GraphingError::NotLGraphing(reason)),
        LCheck::Indeterminate { reason } => Err(GraphingError::NotLGraphing(format!("undecided: {reason}"))),
    }
}

/// Each generator and each nontrivial transversal word gets fiber `{0}`.
pub fn graphing_from_generators(chain: &Chain, n: usize, gens: &[Word]) -> Result<Graphing, GraphingError> {
    let level = chain.level(n).ok_or(GraphingError::NoLevel(n))?;
    let t = &level.table;
    let mut m = Graphing::empty(t.index());
    for (position, w) in gens.iter().enumerate() {
        if !t.contains(w) {
            return Err(GraphingError::NotInSubgroup { position, word: w.clone() });
        }
        m.insert(0, w.clone())?;
    }
    for w in schreier_generators(t).transversal.into_iter().skip(1) {
        m.insert(0, w)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{farber_chain, hnn_chain, ChainCaps};
    use crate::coset::DEFAULT_COSET_CAP;
    use crate::fraction::Fraction;
    use crate::presets::{figure_eight, free_group};

    fn delta2() -> Chain {
        let p = free_group(2);
        let h = SubgroupSpec::new(vec![p.parse_word("a^2").unwrap(), p.parse_word("b").unwrap(), p.parse_word("a b a^-1").unwrap()]);
        farber_chain(&p, &h, 2, &ChainCaps::default()).unwrap()
    }

    #[test]
    fn generating_set_round_trip() {
        let c = delta2();
        let gens = c.level(2).unwrap().spec.generators.clone();
        assert_eq!(gens.len(), 5);
        let m = graphing_from_generators(&c, 2, &gens).unwrap();
        assert_eq!(m.edge_measure(), Fraction::from_integer(2));
        let data = to_labeled_graph(&m, &c.level(2).unwrap().table).unwrap();
        assert_eq!(data.loop_basis.len(), 5);
        for w in &data.loop_basis {
            assert!(c.level(2).unwrap().table.contains(w));
        }
        assert!(is_l_graphing(&m, &c, 2, DEFAULT_COSET_CAP).unwrap().is_true());
        assert_eq!(rank_bound(&m, &c, 2, DEFAULT_COSET_CAP).unwrap(), 5);
    }

    #[test]
    fn deleting_a_transversal_fiber_disconnects() {
        let c = delta2();
        let t = &c.level(2).unwrap().table;
        let gens = c.level(2).unwrap().spec.generators.clone();
        let mut m = graphing_from_generators(&c, 2, &gens).unwrap();
        let w = schreier_generators(t).transversal[1].clone();
        assert!(m.remove(0, &w));
        assert!(matches!(is_l_graphing(&m, &c, 2, DEFAULT_COSET_CAP).unwrap(), LCheck::False { .. }));
        assert!(matches!(is_l_graphing(&Graphing::empty(4), &c, 2, DEFAULT_COSET_CAP).unwrap(), LCheck::False { .. }));
        assert_eq!(to_labeled_graph(&Graphing::empty(4), t).unwrap().component, 1);
    }

    #[test]
    fn index_one_bound_is_generator_count() {
        let p = free_group(3);
        let c = Chain::from_tables(p.clone(), vec![CosetTable::trivial(3)], Default::default()).unwrap();
        let gens: Vec<Word> = (0..3).map(Word::generator).collect();
        let m = graphing_from_generators(&c, 1, &gens).unwrap();
        assert_eq!(m.edge_measure(), Fraction::from_integer(3));
        assert_eq!(rank_bound(&m, &c, 1, DEFAULT_COSET_CAP).unwrap(), 3);
        let short = graphing_from_generators(&c, 1, &gens[..2]).unwrap();
        assert!(rank_bound(&short, &c, 1, DEFAULT_COSET_CAP).is_err());
    }

    #[test]
    fn figure_eight_level_two() {
        let p = figure_eight();
        let c = hnn_chain(&p, "t", 2, &ChainCaps::default()).unwrap();
        let gens = vec![Word::generator(0), Word::generator(1), Word::power_of(2, 2)];
        let m = graphing_from_generators(&c, 2, &gens).unwrap();
        assert_eq!(m.edge_measure(), Fraction::from_integer(2));
        assert_eq!(rank_bound(&m, &c, 2, DEFAULT_COSET_CAP).unwrap(), 3);
        assert!(matches!(graphing_from_generators(&c, 2, &[Word::generator(2)]), Err(GraphingError::NotInSubgroup { position: 0, .. })));
    }
}
