use std::collections::VecDeque;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cover::{CoverGraph, Radius, DEFAULT_RADIUS_CAP};
use super::group::FiniteGroup;
use super::TowerError;
use crate::chains::{Chain, ChainError, ChainProvenance};
use crate::fraction::Fraction;
use crate::presets::free_product_with_z;
use crate::subgroup::schreier_generators;
use crate::words::SubgroupSpec;
use crate::Rational;

/// Random fiber permutations tried per level before giving up.
pub const DEFAULT_LIFT_ATTEMPTS: usize = 256;

/// Covers `I₀ ← I₁ ← …`; level `j+1` has `lift` points over each point of
/// level `j`, point `k` lying over `k / lift`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Tower {
    pub mu_target: Fraction,
    pub lift: usize,
    pub levels: Vec<CoverGraph>,
    pub radii: Vec<Radius>,
}

impl Tower {
    /// Block map `k ↦ k / lift` from level `j + 1` to level `j` commutes with
    /// every generator.
    pub fn block_certificate(&self, j: usize) -> bool {
        let (lo, hi) = (&self.levels[j], &self.levels[j + 1]);
        let r = self.lift;
        let commutes = |up: &[usize], down: &[usize]| (0..hi.n).all(|k| up[k] / r == down[k / r]);
        hi.n == lo.n * r && hi.perms().zip(lo.perms()).all(|(u, d)| commutes(u, d)) && commutes(&hi.sigma, &lo.sigma)
    }

    /// The stabilizer subgroups as a chain over `A ∗ ℤ`, levels numbered
    /// from 0, each certified inside the previous one.
    pub fn to_chain(&self, a: &FiniteGroup) -> Result<Chain, ChainError> {
        let ambient = free_product_with_z(&a.presentation);
        let mut raw = Vec::with_capacity(self.levels.len());
        for (j, c) in self.levels.iter().enumerate() {
            let t = c.table().map_err(|e| ChainError::Parameter(e.to_string()))?;
            let spec = SubgroupSpec::new(schreier_generators(&t).generators);
            raw.push((j, t, spec));
        }
        let provenance = ChainProvenance::new("tower", &[("mu", self.mu_target.to_string()), ("depth", (self.levels.len() - 1).to_string())]);
        Chain::from_levels(ambient, raw, provenance)
    }
}

/// Single cover with `p` vertices and fixed fraction `mu` on `n` points:
/// fixed points first, then regular blocks, `sigma` the cycle `x ↦ x+1`.
pub fn cover_with_mu(a: &FiniteGroup, n: usize, mu: &Rational) -> Result<CoverGraph, TowerError> {
    if *mu < Rational::zero() || *mu > Rational::one() {
        return Err(TowerError::BadTarget(Fraction(mu.clone()).to_string()));
    }
    let order = Rational::from_integer(a.order.into());
    let per_vertex = mu + (Rational::one() - mu) * order;
    let p = Rational::from_integer(n.into()) / &per_vertex;
    let fixed = &p * mu;
    let num: usize = mu.numer().try_into().unwrap_or(usize::MAX);
    let den: usize = mu.denom().try_into().unwrap_or(usize::MAX);
    let minimal_n = num.saturating_add((den - num).saturating_mul(a.order));
    if n == 0 || !p.is_integer() || !fixed.is_integer() {
        return Err(TowerError::Infeasible { n, mu: Fraction(mu.clone()).to_string(), minimal_n });
    }
    let fixed: usize = fixed.to_integer().try_into().expect("fits");
    let regular = (n - fixed) / a.order;
    let perms = (0..a.presentation.ngens())
        .map(|g| {
            let mut perm: Vec<usize> = (0..n).collect();
            for b in 0..regular {
                let off = fixed + b * a.order;
                for e in 0..a.order {
                    perm[off + e] = off + a.regular.perm(g)[e] as usize;
                }
            }
            perm
        })
        .collect();
    let sigma = (0..n).map(|x| (x + 1) % n).collect();
    Ok(CoverGraph::new(a.presentation.names(), perms, sigma))
}

fn trivial_cover(a: &FiniteGroup) -> CoverGraph {
    CoverGraph::new(a.presentation.names(), vec![vec![0]; a.presentation.ngens()], vec![0])
}

/// Largest number of regular orbits `s` carved out of fixed fibers such
/// that the lifted fixed fraction stays at or above the target.
fn conversions(a: usize, lift: usize, fixed: usize, regular: usize, target: &Rational) -> usize {
    (0..=2 * fixed)
        .rev()
        .find(|&s| {
            let x = lift * fixed - a * s;
            let p = x + lift * regular + s;
            Rational::from_integer(x.into()) >= target * Rational::from_integer(p.into())
        })
        .unwrap_or(0)
}

/// Quotient-graph distance of every point's orbit from the base orbit.
fn orbit_distance(c: &CoverGraph) -> Vec<usize> {
    let orb = c.orbits();
    let nv = c.vertices();
    let mut adj = vec![Vec::new(); nv];
    for x in 0..c.n {
        adj[orb[x]].push(orb[c.sigma[x]]);
        adj[orb[c.sigma[x]]].push(orb[x]);
    }
    let mut dist = vec![usize::MAX; nv];
    dist[orb[0]] = 0;
    let mut q = VecDeque::from([orb[0]]);
    while let Some(v) = q.pop_front() {
        for &u in &adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                q.push_back(u);
            }
        }
    }
    (0..c.n).map(|x| dist[orb[x]]).collect()
}

/// Quotient-graph distance from the base to the nearest regular vertex.
fn regular_distance(c: &CoverGraph) -> usize {
    let dist = orbit_distance(c);
    (0..c.n).filter(|&x| c.perms().any(|p| p[x] != x)).map(|x| dist[x]).min().unwrap_or(usize::MAX)
}

fn is_transitive(c: &CoverGraph) -> bool {
    let mut seen = vec![false; c.n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    let mut inv_sigma = vec![0; c.n];
    for (x, &y) in c.sigma.iter().enumerate() {
        inv_sigma[y] = x;
    }
    while let Some(x) = stack.pop() {
        for y in c.perms().map(|p| p[x]).chain([c.sigma[x], inv_sigma[x]]) {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == c.n
}

/// Lift `prev` with `lift` points per point. `split[x]` is the number of
/// regular orbits carved from the fiber of fixed point `x`; `tau[x]` is
/// the fiber permutation carried by `sigma` at `x`.
fn lift_cover(a: &FiniteGroup, prev: &CoverGraph, lift: usize, split: &[usize], tau: &[Vec<usize>]) -> CoverGraph {
    let n = prev.n * lift;
    let orb_fixed: Vec<bool> = (0..prev.n).map(|x| prev.perms().all(|p| p[x] == x)).collect();
    let perms = prev
        .perms()
        .enumerate()
        .map(|(g, down)| {
            let mut perm = vec![0; n];
            for x in 0..prev.n {
                for i in 0..lift {
                    perm[x * lift + i] = if !orb_fixed[x] {
                        down[x] * lift + i
                    } else {
                        let fixed = lift - split[x] * a.order;
                        if i < fixed {
                            x * lift + i
                        } else {
                            let off = fixed + (i - fixed) / a.order * a.order;
                            x * lift + off + a.regular.perm(g)[(i - fixed) % a.order] as usize
                        }
                    };
                }
            }
            perm
        })
        .collect();
    let sigma = (0..n).map(|k| prev.sigma[k / lift] * lift + tau[k / lift][k % lift]).collect();
    CoverGraph::new(prev.generators.0.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>().as_slice(), perms, sigma)
}

struct Search<'a> {
    a: &'a FiniteGroup,
    target: &'a Rational,
    lift: usize,
    seed: u64,
    per_level: usize,
    budget: usize,
    stalled: (usize, usize),
}

impl Search<'_> {
    /// Depth-first over seeded lifts; a level with no radius-increasing
    /// lift sends the search back to try another lift of its parent.
    fn grow(&mut self, levels: &mut Vec<CoverGraph>, radii: &mut Vec<Radius>, depth: usize) -> Result<bool, TowerError> {
        let j = levels.len();
        if j > depth {
            return Ok(true);
        }
        let (a, lift) = (self.a, self.lift);
        let prev = levels.last().unwrap();
        let (fixed, regular) = prev.layout(a.order).ok_or_else(|| TowerError::Invalid(format!("level {}: bad orbit layout", j - 1)))?;
        let mut todo = conversions(a.order, lift, fixed, regular, self.target);
        let dist = orbit_distance(prev);
        let is_fixed: Vec<bool> = (0..prev.n).map(|x| prev.perms().all(|p| p[x] == x)).collect();
        let mut fixed_points: Vec<usize> = (0..prev.n).filter(|&x| is_fixed[x]).collect();
        fixed_points.sort_by(|&x, &y| dist[y].cmp(&dist[x]).then(y.cmp(&x)));
        let mut split = vec![0usize; prev.n];
        for x in fixed_points {
            if todo == 0 {
                break;
            }
            split[x] = todo.min(2);
            todo -= split[x];
        }
        let floor = radii.last().unwrap().value;
        let mut candidates = Vec::new();
        for attempt in 0..self.per_level {
            if self.budget == 0 {
                break;
            }
            self.budget -= 1;
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ ((j as u64) << 32 | attempt as u64));
            let tau: Vec<Vec<usize>> = (0..prev.n)
                .map(|_| {
                    let mut t: Vec<usize> = (0..lift).collect();
                    t.shuffle(&mut rng);
                    t
                })
                .collect();
            let c = lift_cover(a, prev, lift, &split, &tau);
            if !is_transitive(&c) {
                continue;
            }
            let r = c.injectivity_radius(DEFAULT_RADIUS_CAP);
            if r.value > floor || r.capped {
                candidates.push((regular_distance(&c), r, c));
            }
        }
        // smallest admissible radius first; fixed runs keep their length
        // under lifting, so a base far from regular vertices leaves room
        // for the radius to keep growing
        candidates.sort_by(|x, y| x.1.value.cmp(&y.1.value).then(y.0.cmp(&x.0)));
        for (_, r, c) in candidates {
            levels.push(c);
            radii.push(r);
            if self.grow(levels, radii, depth)? {
                return Ok(true);
            }
            levels.pop();
            radii.pop();
        }
        if j >= self.stalled.0 {
            self.stalled = (j, floor);
        }
        Ok(false)
    }
}

/// Tower of `depth + 1` covers of the one-vertex graph for `A ∗ ℤ`.
///
/// Level 0 is the single fixed point. Each level lifts every point to
/// `2|A|` points: regular orbits lift to regular orbits, and a fixed point
/// lifts to `2|A| − s|A|` fixed points and `s ∈ {0,1,2}` regular orbits.
/// The number of conversions is the largest keeping the fixed fraction at
/// or above `mu_target`, taken from fibers farthest from the base. Fiber
/// permutations along `sigma` are drawn from a seeded generator, with
/// backtracking, until every level's injectivity radius exceeds the
/// previous one. `attempts` bounds the lifts tried per level.
pub fn build_tower(a: &FiniteGroup, mu_target: &Rational, depth: usize, seed: u64, attempts: usize) -> Result<Tower, TowerError> {
    if *mu_target < Rational::zero() || *mu_target >= Rational::one() {
        return Err(TowerError::BadTarget(Fraction(mu_target.clone()).to_string()));
    }
    if a.order < 2 {
        return Err(TowerError::TrivialFactor);
    }
    let lift = 2 * a.order;
    let base = trivial_cover(a);
    let mut radii = vec![base.injectivity_radius(DEFAULT_RADIUS_CAP)];
    let mut levels = vec![base];
    let budget = attempts.saturating_mul(depth.max(1)).saturating_mul(4);
    let mut search = Search { a, target: mu_target, lift, seed, per_level: attempts, budget, stalled: (0, 0) };
    if !search.grow(&mut levels, &mut radii, depth)? {
        let (level, radius) = search.stalled;
        return Err(TowerError::RadiusStalled { level, attempts, radius });
    }
    Ok(Tower { mu_target: Fraction(mu_target.clone()), lift, levels, radii })
}
