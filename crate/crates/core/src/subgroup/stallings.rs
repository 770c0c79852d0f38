use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::words::SubgroupSpec;

/// A folded graph: no vertex has two outgoing (or two incoming) edges with
/// the same label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldedGraph {
    pub vertices: usize,
    /// `(source, generator, target)`, sorted.
    pub edges: Vec<(usize, usize, usize)>,
    pub base: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldResult {
    pub rank: usize,
    /// `None` when the index is infinite.
    pub index: Option<usize>,
    pub graph: FoldedGraph,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Fold the wedge of generator loops of `S` inside the free group of the
/// given rank. The rank of the subgroup is `E − V + 1`; the index is the
/// vertex count when every vertex has all `2·rank` edge ends, and infinite
/// otherwise.
pub fn stallings_fold(rank: usize, s: &SubgroupSpec) -> FoldResult {
    let mut vertices = 1usize;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for w in &s.generators {
        let letters = w.letters();
        if letters.is_empty() {
            continue;
        }
        let mut cur = 0;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                vertices += 1;
                vertices - 1
            };
            if l.inverse {
                edges.push((next, l.gen(), cur));
            } else {
                edges.push((cur, l.gen(), next));
            }
            cur = next;
        }
    }

    let mut parent: Vec<usize> = (0..vertices).collect();
    loop {
        let mut merged = false;
        let mut out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut inc: HashMap<(usize, usize), usize> = HashMap::new();
        for &(a, g, b) in &edges {
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if let Some(&t) = out.get(&(a, g)) {
                let (t, b) = (find(&mut parent, t), find(&mut parent, b));
                if t != b {
                    let (lo, hi) = if t < b { (t, b) } else { (b, t) };
                    parent[hi] = lo;
                    merged = true;
                }
            } else {
                out.insert((a, g), b);
            }
            let (a, b) = (find(&mut parent, a), find(&mut parent, b));
            if let Some(&t) = inc.get(&(b, g)) {
                let (t, a) = (find(&mut parent, t), find(&mut parent, a));
                if t != a {
                    let (lo, hi) = if t < a { (t, a) } else { (a, t) };
                    parent[hi] = lo;
                    merged = true;
                }
            } else {
                inc.insert((b, g), a);
            }
        }
        if !merged {
            break;
        }
    }

    let roots: BTreeSet<usize> = (0..vertices).map(|v| find(&mut parent, v)).collect();
    let label: HashMap<usize, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut folded: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for &(a, g, b) in &edges {
        let a = label[&find(&mut parent, a)];
        let b = label[&find(&mut parent, b)];
        folded.insert((a, g, b));
    }
    let v = roots.len();
    let e = folded.len();
    let complete = rank > 0 && e == v * rank;
    let graph = FoldedGraph { vertices: v, edges: folded.into_iter().collect(), base: label[&find(&mut parent, 0)] };
    FoldResult { rank: e + 1 - v, index: if complete || rank == 0 { Some(v) } else { None }, graph }
}
