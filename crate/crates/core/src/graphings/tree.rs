use serde::{Deserialize, Serialize};

use crate::chains::Chain;
use crate::fraction::Fraction;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeLevel {
    /// Level number in the chain.
    pub n: usize,
    pub cosets: usize,
    /// Tree level the parent map points into; `None` for the root's
    /// children.
    pub parent_level: Option<usize>,
    /// `parent[c]` is the coset of the parent level containing coset `c`.
    pub parent: Vec<usize>,
}

/// Cosets of every chain level, joined by inclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTree {
    pub levels: Vec<TreeLevel>,
}

impl CosetTree {
    /// Measure of the shadow of any vertex at tree level `level`.
    pub fn shadow_measure(&self, level: usize) -> Fraction {
        Fraction::new(1, self.levels[level].cosets as i64)
    }

    /// Cosets at tree level `child` lying over coset `c` of its parent level.
    pub fn children(&self, child: usize, c: usize) -> Vec<usize> {
        let l = &self.levels[child];
        (0..l.cosets).filter(|&x| l.parent[x] == c).collect()
    }
}

/// Parent maps follow each level's certified parent. Coset `c` of a level
/// is `Γₙ·w` for a spanning-tree word `w`; its parent is `Γₘ·w`.
pub fn build_coset_tree(chain: &Chain) -> CosetTree {
    let mut levels = Vec::with_capacity(chain.levels.len());
    for l in &chain.levels {
        let t = &l.table;
        let mut parent = vec![0usize; t.index()];
        if let Some(pi) = l.parent {
            let pt = &chain.levels[pi].table;
            let (order, tree) = t.bfs_order();
            for &c in order.iter().skip(1) {
                let (p, col) = tree[c].unwrap();
                parent[c] = pt.act_col(parent[p], col);
            }
        }
        levels.push(TreeLevel { n: l.n, cosets: t.index(), parent_level: l.parent, parent });
    }
    CosetTree { levels }
}
