use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use super::table::{CosetTable, Provenance};

/// Default cap on the order of the image permutation group in
/// [`normal_core`].
pub const DEFAULT_IMAGE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("image permutation group has more than {0} elements")]
    ImageTooLarge(usize),
}

/// Table of `H₁ ∩ H₂`: the orbit of `(0, 0)` under the product action,
/// labeled in breadth-first order over the columns.
pub fn intersect(t1: &CosetTable, t2: &CosetTable) -> CosetTable {
    assert_eq!(t1.ngens(), t2.ngens(), "tables over different generator sets");
    let ncols = 2 * t1.ngens();
    let mut label: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
    label.insert((0, 0), 0);
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut i = 0;
    while i < pairs.len() {
        let (a, b) = pairs[i];
        for (x, col) in cols.iter_mut().enumerate() {
            let next = (t1.act_col(a as usize, x) as u32, t2.act_col(b as usize, x) as u32);
            let id = *label.entry(next).or_insert_with(|| {
                pairs.push(next);
                (pairs.len() - 1) as u32
            });
            col.push(id);
        }
        i += 1;
    }
    CosetTable::from_cols(t1.ngens(), cols, Provenance::Derived { tag: "intersection".into() })
}

/// Table of the normal core `⋂_g H^g`, realized as the right regular action
/// of the image of the group in `Sym(index)`. The core's index is the order
/// of that image.
pub fn normal_core(t: &CosetTable, cap: usize) -> Result<CosetTable, CoreError> {
    if t.is_normal() {
        return Ok(t.clone().with_provenance(Provenance::Derived { tag: "normal core".into() }));
    }
    let n = t.index();
    let ncols = 2 * t.ngens();
    let identity: Vec<u32> = (0..n as u32).collect();
    let mut label: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut elems: Vec<Vec<u32>> = vec![identity.clone()];
    label.insert(identity, 0);
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut queue = VecDeque::from([0usize]);
    let mut i = 0;
    while i < elems.len() {
        queue.pop_front();
        for (x, col) in cols.iter_mut().enumerate() {
            // right multiplication: first the element, then the generator
            let prod: Vec<u32> = elems[i].iter().map(|&c| t.act_col(c as usize, x) as u32).collect();
            let next = label.len() as u32;
            let id = match label.get(&prod) {
                Some(&id) => id,
                None => {
                    if elems.len() >= cap {
                        return Err(CoreError::ImageTooLarge(cap));
                    }
                    label.insert(prod.clone(), next);
                    elems.push(prod);
                    next
                }
            };
            col.push(id);
        }
        i += 1;
    }
    Ok(CosetTable::from_cols(t.ngens(), cols, Provenance::Derived { tag: "normal core".into() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{enumerate, low_index, DEFAULT_NODE_CAP};
    use crate::words::{parse_presentation, Presentation, SubgroupSpec, Word};

    fn pres(text: &str) -> Presentation {
        parse_presentation(text).unwrap().presentation
    }

    #[test]
    fn self_intersection_is_isomorphic() {
        let p = pres("gens a b\n");
        for t in low_index(&p, 3, DEFAULT_NODE_CAP).unwrap() {
            assert_eq!(intersect(&t, &t).canonical_key(), t.canonical_key());
        }
    }

    #[test]
    fn two_index_two_kernels() {
        let p = pres("gens a b\n");
        let h1 = enumerate(&p, &SubgroupSpec::new(vec![p.parse_word("a^2").unwrap(), p.parse_word("b").unwrap(), p.parse_word("a b a^-1").unwrap()]), 100).unwrap();
        let h2 = enumerate(&p, &SubgroupSpec::new(vec![p.parse_word("b^2").unwrap(), p.parse_word("a").unwrap(), p.parse_word("b a b^-1").unwrap()]), 100).unwrap();
        let k = intersect(&h1, &h2);
        assert_eq!(k.index(), 4);
        assert!(k.validate(&p).is_empty());
        let all2: Vec<_> = low_index(&p, 2, DEFAULT_NODE_CAP).unwrap().into_iter().filter(|t| t.index() == 2).collect();
        let delta = all2.iter().skip(1).fold(all2[0].clone(), |acc, t| intersect(&acc, t));
        assert_eq!(delta.index(), 4);
    }

    #[test]
    fn intersection_index_bounds() {
        let p = pres("gens a b\n");
        let tables = low_index(&p, 3, DEFAULT_NODE_CAP).unwrap();
        for h in &tables {
            for k in &tables {
                let i = intersect(h, k).index();
                let lcm = num_integer::lcm(h.index(), k.index());
                assert!(i >= lcm && i <= h.index() * k.index() && i % lcm == 0);
            }
        }
    }

    #[test]
    fn core_of_reflection_subgroup_in_s3() {
        let p = pres("gens s r\nrel s^2\nrel r^3\nrel s r s r\n");
        let h = enumerate(&p, &SubgroupSpec::new(vec![Word::generator(0)]), 100).unwrap();
        assert_eq!(h.index(), 3);
        let core = normal_core(&h, DEFAULT_IMAGE_CAP).unwrap();
        assert_eq!(core.index(), 6);
        assert!(core.validate(&p).is_empty());
        assert!(core.is_normal());
        assert_eq!(normal_core(&h, 4), Err(CoreError::ImageTooLarge(4)));
    }

    #[test]
    fn core_of_normal_subgroup_is_itself() {
        let p = pres("gens a b\n");
        for t in low_index(&p, 3, DEFAULT_NODE_CAP).unwrap() {
            let core = normal_core(&t, DEFAULT_IMAGE_CAP).unwrap();
            if t.index() <= 2 {
                assert_eq!(core.index(), t.index());
            }
            assert!(core.index() % t.index() == 0);
            assert!(core.is_normal());
            // the core lies in the subgroup: every word fixing core coset 0 fixes coset 0 of t
            let (order, parent) = core.bfs_order();
            let _ = order;
            for c in 0..core.index() {
                for x in 0..2 * core.ngens() {
                    let d = core.act_col(c, x);
                    if parent[d] != Some((c, x)) {
                        let w = schreier_word(&core, &parent, c, x, d);
                        assert!(t.contains(&w));
                    }
                }
            }
        }
    }

    fn path(parent: &[Option<(usize, usize)>], mut c: usize) -> Vec<crate::words::Letter> {
        let mut out = Vec::new();
        while let Some((p, x)) = parent[c] {
            out.push(crate::words::Letter::from_column(x));
            c = p;
        }
        out.reverse();
        out
    }

    fn schreier_word(_t: &CosetTable, parent: &[Option<(usize, usize)>], c: usize, x: usize, d: usize) -> Word {
        let mut letters = path(parent, c);
        letters.push(crate::words::Letter::from_column(x));
        letters.extend(path(parent, d).into_iter().rev().map(|l| l.inv()));
        Word::from_letters(letters)
    }
}
