use std::collections::VecDeque;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::group::FiniteGroup;
use super::TowerError;
use crate::coset::{CosetTable, Provenance};
use crate::words::Presentation;

/// Default largest radius the injectivity search will certify.
pub const DEFAULT_RADIUS_CAP: usize = 64;

/// A transitive action of `A ∗ ℤ` on `n` points: one permutation per
/// generator of `A` and `sigma` for the `ℤ` factor. Point 0 is the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverGraph {
    pub n: usize,
    pub generators: NamedPerms,
    pub sigma: Vec<usize>,
}

/// Generator permutations in presentation order; serialized as a JSON
/// object that keeps that order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NamedPerms(pub Vec<(String, Vec<usize>)>);

impl Serialize for NamedPerms {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for NamedPerms {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = NamedPerms;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from generator names to permutations")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<NamedPerms, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Vec<usize>>()? {
                    out.push((k, v));
                }
                Ok(NamedPerms(out))
            }
        }
        d.deserialize_map(V)
    }
}

/// Injectivity radius, or the cap if it was reached first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radius {
    pub value: usize,
    /// `value` is only a lower bound.
    pub capped: bool,
}

impl CoverGraph {
    pub fn new(names: &[String], perms: Vec<Vec<usize>>, sigma: Vec<usize>) -> Self {
        CoverGraph { n: sigma.len(), generators: NamedPerms(names.iter().cloned().zip(perms).collect()), sigma }
    }

    pub fn perms(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.generators.0.iter().map(|(_, p)| p)
    }

    /// The action as a coset table over `A ∗ ℤ` (the `A` generators, then
    /// the `ℤ` generator).
    pub fn table(&self) -> Result<CosetTable, TowerError> {
        let mut perms: Vec<Vec<usize>> = self.perms().cloned().collect();
        perms.push(self.sigma.clone());
        CosetTable::from_perms(perms, Provenance::Derived { tag: "cover".into() }).map_err(|e| TowerError::Invalid(e.to_string()))
    }

    /// `A`-orbit id of every point, ids in order of first appearance.
    pub fn orbits(&self) -> Vec<usize> {
        let mut id = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if id[start] != usize::MAX {
                continue;
            }
            id[start] = next;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for p in self.perms() {
                    let y = p[x];
                    if id[y] == usize::MAX {
                        id[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        id
    }

    /// `(fixed points, regular orbits)`; `None` if some orbit has another size.
    pub fn layout(&self, order: usize) -> Option<(usize, usize)> {
        let id = self.orbits();
        let count = id.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &i in &id {
            sizes[i] += 1;
        }
        let fixed = sizes.iter().filter(|&&s| s == 1).count();
        let regular = sizes.iter().filter(|&&s| s == order && s != 1).count();
        (fixed + regular == count).then_some((fixed, regular))
    }

    /// Vertex count of the quotient graph.
    pub fn vertices(&self) -> usize {
        self.orbits().iter().max().map_or(0, |m| m + 1)
    }

    /// Relators of `A`, transitivity, and orbit sizes 1 or `|A|` with free
    /// action on the regular orbits.
    pub fn check(&self, a: &FiniteGroup, ambient: &Presentation) -> Result<(), TowerError> {
        let t = self.table()?;
        if let Some(v) = t.validate(ambient).into_iter().next() {
            return Err(TowerError::Invalid(v.to_string()));
        }
        if self.layout(a.order).is_none() {
            return Err(TowerError::Invalid("an A-orbit is neither a fixed point nor regular".into()));
        }
        Ok(())
    }

    /// Largest `k` such that non-backtracking paths of length at most `k`
    /// from the base vertex of the quotient graph (vertices are `A`-orbits,
    /// point `x` is an edge from the orbit of `x` to the orbit of `σx`)
    /// end at distinct vertices. Equivalently, the radius-`k` ball of the
    /// covering tree maps injectively.
    pub fn injectivity_radius(&self, cap: usize) -> Radius {
        let orb = self.orbits();
        let nv = self.vertices();
        // incident edge ends: (edge, leaves forward)
        let mut ends: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nv];
        for x in 0..self.n {
            ends[orb[x]].push((x, true));
            ends[orb[self.sigma[x]]].push((x, false));
        }
        let mut seen = vec![false; nv];
        seen[orb[0]] = true;
        let mut frontier: VecDeque<(usize, Option<(usize, bool)>)> = VecDeque::from([(orb[0], None)]);
        for depth in 0..cap {
            let mut next = VecDeque::new();
            for (v, arrived) in frontier {
                for &(e, fwd) in &ends[v] {
                    if arrived == Some((e, !fwd)) {
                        continue;
                    }
                    let u = if fwd { orb[self.sigma[e]] } else { orb[e] };
                    if seen[u] {
                        return Radius { value: depth, capped: false };
                    }
                    seen[u] = true;
                    next.push_back((u, Some((e, fwd))));
                }
            }
            if next.is_empty() {
                return Radius { value: cap, capped: true };
            }
            frontier = next;
        }
        Radius { value: cap, capped: true }
    }
}
