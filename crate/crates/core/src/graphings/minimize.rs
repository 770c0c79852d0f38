use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::algebra::{Graphing, GraphingError, DEFAULT_LABEL_CAP};
use super::labeled::{check_l_graphing, graphing_from_generators, LCheck};
use crate::chains::Chain;
use crate::coset::CosetTable;
use crate::subgroup::{rank_bounds, schreier_generators, TietzeLevel};
use crate::words::{Letter, Presentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizeBudget {
    pub label_cap: usize,
    /// Random label swaps attempted after the first greedy pass.
    pub iterations: usize,
    /// Coset budget for each L-graphing check.
    pub coset_cap: usize,
    pub seed: u64,
}

impl Default for MinimizeBudget {
    fn default() -> Self {
        MinimizeBudget { label_cap: DEFAULT_LABEL_CAP, iterations: 50, coset_cap: 10_000, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct Minimized {
    pub graphing: Graphing,
    /// `e(M)·index − index + 1` for the returned graphing.
    pub bound: usize,
    pub seed_bound: usize,
    /// Whether the returned graphing was confirmed to be an L-graphing.
    pub certified: bool,
    pub checks: usize,
}

struct Search<'a> {
    ambient: &'a Presentation,
    table: &'a CosetTable,
    cap: usize,
    checks: usize,
}

impl Search<'_> {
    fn is_l(&mut self, m: &Graphing) -> bool {
        self.checks += 1;
        matches!(check_l_graphing(m, self.ambient, self.table, self.cap), Ok(LCheck::True { .. }))
    }

    /// Drop incidences one at a time, longest labels first, while the
    /// result stays an L-graphing.
    fn greedy(&mut self, mut m: Graphing) -> Graphing {
        loop {
            let mut order: Vec<(usize, Word)> = m.incidences().map(|(c, w)| (c, w.clone())).collect();
            order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            let mut changed = false;
            for (c, w) in order {
                m.remove(c, &w);
                if self.is_l(&m) {
                    changed = true;
                } else {
                    m.insert(c, w).expect("coset in range");
                }
            }
            if !changed {
                return m;
            }
        }
    }
}

fn bound_of(m: &Graphing) -> usize {
    (m.incidence_count() + 1).saturating_sub(m.index())
}

/// Greedy deletion from the generating-set graphing, then seeded random
/// label swaps `(c, γ) → (c, γx)` each followed by another greedy pass.
pub fn minimize_graphing(chain: &Chain, n: usize, budget: &MinimizeBudget) -> Result<Minimized, GraphingError> {
    let level = chain.level(n).ok_or(GraphingError::NoLevel(n))?;
    let t = &level.table;
    let gens = match rank_bounds(&chain.ambient, t, &[], TietzeLevel::default()) {
        Ok(b) => b.presentation.map(|sp| sp.generator_words).unwrap_or_default(),
        Err(_) => schreier_generators(t).generators,
    };
    let seed = graphing_from_generators(chain, n, &gens)?;
    let seed_bound = bound_of(&seed);
    let mut search = Search { ambient: &chain.ambient, table: t, cap: budget.coset_cap, checks: 0 };
    if !search.is_l(&seed) {
        let checks = search.checks;
        return Ok(Minimized { graphing: seed, bound: seed_bound, seed_bound, certified: false, checks });
    }
    let mut best = search.greedy(seed);
    let mut current = best.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let ncols = 2 * chain.ambient.ngens();
    for _ in 0..budget.iterations {
        if ncols == 0 || current.is_empty() {
            break;
        }
        let incidences: Vec<(usize, Word)> = current.incidences().map(|(c, w)| (c, w.clone())).collect();
        let (c, w) = incidences[rng.gen_range(0..incidences.len())].clone();
        let x = Word::from_letters([Letter::from_column(rng.gen_range(0..ncols))]);
        let swapped = w.concat(&x);
        if swapped.len() > budget.label_cap || current.contains(c, &swapped) {
            continue;
        }
        let mut candidate = current.clone();
        candidate.remove(c, &w);
        candidate.insert(c, swapped).expect("coset in range");
        if !search.is_l(&candidate) {
            continue;
        }
        let reduced = search.greedy(candidate);
        if reduced.incidence_count() < best.incidence_count() {
            best = reduced.clone();
        }
        current = reduced;
    }
    let checks = search.checks;
    Ok(Minimized { bound: bound_of(&best), graphing: best, seed_bound, certified: true, checks })
}
