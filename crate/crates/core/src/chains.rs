//! Chains of finite-index subgroups and their gradient sequences.

use std::collections::BTreeMap;

use num_integer::Integer as IntegerOps;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coset::{enumerate, intersect, low_index, normal_core, CoreError, CosetTable, EnumerateError, LowIndexError, Provenance};
use crate::fraction::Fraction;
use crate::presets;
use crate::subgroup::{rank_bounds, schreier_generators, tietze_simplify, RankBounds, TietzeLevel};
use crate::words::{Presentation, SubgroupSpec, Word};

/// Budgets for chain construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCaps {
    pub coset_cap: usize,
    pub node_cap: usize,
    pub image_cap: usize,
    /// Largest index a level built from intersections may reach.
    pub index_cap: usize,
}

impl Default for ChainCaps {
    fn default() -> Self {
        ChainCaps {
            coset_cap: crate::coset::DEFAULT_COSET_CAP,
            node_cap: crate::coset::DEFAULT_NODE_CAP,
            image_cap: crate::coset::DEFAULT_IMAGE_CAP,
            index_cap: 10_000,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum ChainError {
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    LowIndex(#[from] LowIndexError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("level {level}: generator {generator} does not lie in the previous level")]
    NotNested { level: usize, generator: usize },
    #[error("level {level}: expected index {expected}, found {found}")]
    IndexMismatch { level: usize, expected: usize, found: usize },
    #[error("level {level}: subgroup is not normal")]
    NotNormal { level: usize },
    #[error("level {level}: index {found} exceeds the cap of {cap}")]
    IndexCap { level: usize, found: usize, cap: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainLevel {
    /// Level number in the construction (`Γₙ` has `n` here).
    pub n: usize,
    pub table: CosetTable,
    /// Generators of the level: the defining spec, or Schreier generators
    /// for levels built by intersection.
    pub spec: SubgroupSpec,
    /// Position of the level this one is certified to lie in; `None` means
    /// only the whole group.
    pub parent: Option<usize>,
    /// Same index as the previous level.
    pub stabilized: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainProvenance {
    pub kind: String,
    pub parameters: BTreeMap<String, String>,
}

impl ChainProvenance {
    pub fn new(kind: &str, parameters: &[(&str, String)]) -> Self {
        ChainProvenance { kind: kind.into(), parameters: parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() }
    }
}

/// `(n, table, spec)` for one level.
pub type RawLevel = (usize, CosetTable, SubgroupSpec);

/// A nested sequence of finite-index subgroups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Chain {
    pub ambient: Presentation,
    pub levels: Vec<ChainLevel>,
    pub provenance: ChainProvenance,
    /// Why construction stopped early, if it did.
    pub truncated: Option<String>,
}

impl Chain {
    /// Assemble a chain from `(n, table, spec)` triples, checking that each
    /// level's generators lie in the previous level and that indices divide.
    pub fn from_levels(ambient: Presentation, raw: Vec<(usize, CosetTable, SubgroupSpec)>, provenance: ChainProvenance) -> Result<Chain, ChainError> {
        let parents = (0..raw.len()).map(|i| i.checked_sub(1)).collect();
        Chain::with_parents(ambient, raw, parents, provenance)
    }

    /// As [`Chain::from_levels`], but each level is certified against the
    /// given earlier level (`None` for the whole group) instead of its
    /// immediate predecessor.
    pub fn with_parents(ambient: Presentation, raw: Vec<RawLevel>, parents: Vec<Option<usize>>, provenance: ChainProvenance) -> Result<Chain, ChainError> {
        let mut levels: Vec<ChainLevel> = Vec::with_capacity(raw.len());
        for ((n, table, spec), parent) in raw.into_iter().zip(parents) {
            if let Some(pi) = parent {
                let prev: &ChainLevel = levels.get(pi).ok_or_else(|| ChainError::Parameter(format!("level {n}: parent {pi} is not an earlier level")))?;
                check_nested(&prev.table, &spec, n)?;
                if table.index() % prev.table.index() != 0 {
                    return Err(ChainError::IndexMismatch { level: n, expected: prev.table.index(), found: table.index() });
                }
            }
            let stabilized = levels.last().is_some_and(|prev| prev.table.index() == table.index());
            levels.push(ChainLevel { n, table, spec, parent, stabilized });
        }
        Ok(Chain { ambient, levels, provenance, truncated: None })
    }

    /// Chain from bare tables; generators are taken to be Schreier
    /// generators and levels are numbered from 1.
    pub fn from_tables(ambient: Presentation, tables: Vec<CosetTable>, provenance: ChainProvenance) -> Result<Chain, ChainError> {
        let raw = tables.into_iter().enumerate().map(|(i, t)| (i + 1, spec_of(&t), t)).map(|(n, s, t)| (n, t, s)).collect();
        Chain::from_levels(ambient, raw, provenance)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.table.index()).collect()
    }

    pub fn level(&self, n: usize) -> Option<&ChainLevel> {
        self.levels.iter().find(|l| l.n == n)
    }

    /// Re-run the nestedness check on every consecutive pair.
    pub fn verify_nested(&self) -> Result<(), ChainError> {
        for l in &self.levels {
            if let Some(pi) = l.parent {
                check_nested(&self.levels[pi].table, &l.spec, l.n)?;
            }
        }
        Ok(())
    }
}

fn check_nested(prev: &CosetTable, spec: &SubgroupSpec, level: usize) -> Result<(), ChainError> {
    for (i, g) in spec.generators.iter().enumerate() {
        if !prev.contains(g) {
            return Err(ChainError::NotNested { level, generator: i });
        }
    }
    Ok(())
}

fn spec_of(t: &CosetTable) -> SubgroupSpec {
    match t.defining_spec() {
        Some(s) if !s.normal => s.clone(),
        _ => SubgroupSpec::new(schreier_generators(t).generators),
    }
}

/// Farber-style chain: level 1 is `H`; level `n ≥ 2` is `K ∩ Δₙ` where `K`
/// is the normal core of `H` and `Δₙ` is the intersection of all subgroups
/// of index at most `n`. Budget failures after level 1 truncate the chain.
pub fn farber_chain(p: &Presentation, h: &SubgroupSpec, depth: usize, caps: &ChainCaps) -> Result<Chain, ChainError> {
    let provenance = ChainProvenance::new("farber", &[("depth", depth.to_string()), ("subgroup", h.canonical_text(p.names()))]);
    let h_table = enumerate(p, h, caps.coset_cap)?;
    let mut raw = vec![(1usize, h_table.clone(), h.clone())];
    let mut truncated = None;
    if depth >= 2 {
        match farber_levels(p, &h_table, depth, caps) {
            Ok((levels, stop)) => {
                raw.extend(levels);
                truncated = stop;
            }
            Err(e) => truncated = Some(e.to_string()),
        }
    }
    raw.truncate(depth.max(1));
    let mut chain = Chain::from_levels(p.clone(), raw, provenance)?;
    chain.truncated = truncated;
    Ok(chain)
}


fn farber_levels(p: &Presentation, h: &CosetTable, depth: usize, caps: &ChainCaps) -> Result<(Vec<RawLevel>, Option<String>), ChainError> {
    let core = normal_core(h, caps.image_cap)?;
    let mut delta = CosetTable::trivial(p.ngens());
    let mut out = Vec::new();
    for n in 2..=depth {
        let subgroups = match low_index(p, n, caps.node_cap) {
            Ok(s) => s,
            Err(e) => return Ok((out, Some(format!("level {n}: {e}")))),
        };
        for l in subgroups.iter().filter(|t| t.index() == n) {
            delta = intersect(&delta, l);
            if delta.index() > caps.index_cap {
                let e = ChainError::IndexCap { level: n, found: delta.index(), cap: caps.index_cap };
                return Ok((out, Some(e.to_string())));
            }
        }
        let level = intersect(&core, &delta);
        if level.index() > caps.index_cap {
            let e = ChainError::IndexCap { level: n, found: level.index(), cap: caps.index_cap };
            return Ok((out, Some(e.to_string())));
        }
        let level = level.with_provenance(Provenance::Derived { tag: format!("core ∩ Δ{n}") });
        let spec = spec_of(&level);
        out.push((n, level, spec));
    }
    Ok((out, None))
}

/// `Γₙ = ⟨A, tⁿ⟩` for `n = 1..=depth`, where `A` is generated by every
/// generator except the stable letter. Each level must have index `n` and
/// be normal.
pub fn hnn_chain(p: &Presentation, stable: &str, depth: usize, caps: &ChainCaps) -> Result<Chain, ChainError> {
    let t = p.generator_index(stable).ok_or_else(|| ChainError::UnknownGenerator(stable.into()))?;
    let base: Vec<Word> = (0..p.ngens()).filter(|&g| g != t).map(Word::generator).collect();
    let mut raw = Vec::new();
    for n in 1..=depth {
        let mut gens = base.clone();
        gens.push(Word::power_of(t, n as i64));
        let spec = SubgroupSpec::new(gens);
        let table = enumerate(p, &spec, caps.coset_cap)?;
        if table.index() != n {
            return Err(ChainError::IndexMismatch { level: n, expected: n, found: table.index() });
        }
        if !table.is_normal() {
            return Err(ChainError::NotNormal { level: n });
        }
        raw.push((n, table, spec));
    }
    // ⟨A, tⁿ⟩ lies in ⟨A, tᵈ⟩ exactly when d divides n, so consecutive
    // levels need not be nested; certify each against its largest proper
    // divisor instead.
    let parents = (1..=depth).map(|n| (1..n).rev().find(|d| n % d == 0).map(|d| d - 1)).collect();
    let provenance = ChainProvenance::new("hnn", &[("stable", stable.to_string()), ("depth", depth.to_string())]);
    Chain::with_parents(p.clone(), raw, parents, provenance)
}

/// Generators of level `n` of the lamplighter chain:
/// `{a^(tⁱ) : 0 ≤ i < 2ⁿ} ∪ {t^(2ⁿ)}`.
pub fn lamplighter_level_spec(n: u32) -> SubgroupSpec {
    let period = 1i64 << n;
    let mut gens: Vec<Word> = (0..period).map(presets::lamp).collect();
    gens.push(Word::power_of(1, period));
    SubgroupSpec::new(gens)
}

/// The chain `Γₙ = ker(W_m → ℤ/2ⁿ)`, `n = 0..=depth`, inside the finite
/// quotient `W_m = ℤ/2 ≀ ℤ/2^m`.
pub fn lamplighter_chain(m: u32, depth: u32, caps: &ChainCaps) -> Result<Chain, ChainError> {
    if depth > m {
        return Err(ChainError::Parameter(format!("depth {depth} exceeds m = {m}")));
    }
    let p = presets::lamplighter(m);
    let mut raw = Vec::new();
    for n in 0..=depth {
        let spec = lamplighter_level_spec(n);
        let table = enumerate(&p, &spec, caps.coset_cap)?;
        let expected = 1usize << n;
        if table.index() != expected {
            return Err(ChainError::IndexMismatch { level: n as usize, expected, found: table.index() });
        }
        raw.push((n as usize, table, spec));
    }
    let provenance = ChainProvenance::new("lamplighter", &[("m", m.to_string()), ("depth", depth.to_string())]);
    Chain::from_levels(p, raw, provenance)
}

/// One level of a gradient report. Ratios are `(x − 1)/index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub n: usize,
    pub index: usize,
    pub stabilized: bool,
    pub rank_lower: usize,
    /// Best of the Tietze bound and the Schreier bound propagated from the
    /// parent level, so the ratio never exceeds the parent's.
    pub rank_upper: usize,
    /// Generator count of the simplified subgroup presentation alone.
    pub rank_upper_tietze: usize,
    pub exact: bool,
    pub beta1: usize,
    pub b1p: BTreeMap<u64, usize>,
    pub ratio_rank_upper: Fraction,
    pub ratio_rank_lower: Fraction,
    pub ratio_beta1: Fraction,
    pub ratio_b1p: BTreeMap<u64, Fraction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelOutcome {
    Ok(LevelReport),
    Failed { n: usize, index: usize, error: String },
}

impl LevelOutcome {
    pub fn report(&self) -> Option<&LevelReport> {
        match self {
            LevelOutcome::Ok(r) => Some(r),
            LevelOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradientReport {
    pub provenance: ChainProvenance,
    /// Upper bound for the rank of the ambient group (simplified generator
    /// count), the start of the Schreier propagation.
    pub ambient_rank_upper: usize,
    pub levels: Vec<LevelOutcome>,
    pub truncated: Option<String>,
}

impl GradientReport {
    pub fn reports(&self) -> impl Iterator<Item = &LevelReport> {
        self.levels.iter().filter_map(LevelOutcome::report)
    }
}

fn ratio(x: usize, index: usize) -> Fraction {
    Fraction::new(x as i64 - 1, index as i64)
}

/// Rank and homology bounds per level, evaluated concurrently and assembled
/// in level order.
pub fn gradient_sequence(chain: &Chain, primes: &[u64], level: TietzeLevel) -> GradientReport {
    let bounds: Vec<Result<RankBounds, String>> = chain
        .levels
        .par_iter()
        .map(|l| rank_bounds(&chain.ambient, &l.table, primes, level).map_err(|e| e.to_string()))
        .collect();
    let ambient_upper = tietze_simplify(&chain.ambient, level).ngens();
    // (index, upper) per level, for Schreier propagation along parents
    let mut known: Vec<Option<(usize, usize)>> = Vec::with_capacity(bounds.len());
    let mut out = Vec::with_capacity(bounds.len());
    for (l, b) in chain.levels.iter().zip(bounds) {
        let index = l.table.index();
        let parent = match l.parent {
            Some(pi) => known[pi],
            None => Some((1, ambient_upper)),
        };
        match b {
            Ok(b) => {
                let mut upper = b.upper;
                if let Some((parent_index, parent_upper)) = parent {
                    let k = (index / parent_index) as i64;
                    let propagated = 1 + k * (parent_upper as i64 - 1);
                    upper = upper.min(propagated.max(0) as usize);
                }
                let lower = b.lower.min(upper);
                let ratio_b1p = b.homology.b1p.iter().map(|(&p, &v)| (p, ratio(v, index))).collect();
                out.push(LevelOutcome::Ok(LevelReport {
                    n: l.n,
                    index,
                    stabilized: l.stabilized,
                    rank_lower: lower,
                    rank_upper: upper,
                    rank_upper_tietze: b.upper,
                    exact: lower == upper || chain.ambient.is_free(),
                    beta1: b.homology.beta1,
                    b1p: b.homology.b1p.clone(),
                    ratio_rank_upper: ratio(upper, index),
                    ratio_rank_lower: ratio(lower, index),
                    ratio_beta1: ratio(b.homology.beta1, index),
                    ratio_b1p,
                }));
                known.push(Some((index, upper)));
            }
            Err(error) => {
                out.push(LevelOutcome::Failed { n: l.n, index, error });
                known.push(None);
            }
        }
    }
    GradientReport { provenance: chain.provenance.clone(), ambient_rank_upper: ambient_upper, levels: out, truncated: chain.truncated.clone() }
}

/// `d(Γ)/b + d(N)/a`, the bound on `(d(Hᵢ) − 1)/[Γ:Hᵢ]` for a group with a
/// finitely generated normal subgroup `N` of infinite index.
pub fn fgnormal_bound<T: IntegerOps + Clone>(d_n: T, d_g: T, a: T, b: T) -> Ratio<T> {
    Ratio::new(d_g, b) + Ratio::new(d_n, a)
}

/// Fraction of the cosets at level `n` fixed by `w`; 0 means `w` acts
/// without fixed points there.
pub fn farber_defect(chain: &Chain, w: &Word, n: usize) -> Option<Fraction> {
    let level = chain.level(n)?;
    let t = &level.table;
    Some(Fraction::new(t.fixed_points(w) as i64, t.index() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{figure_eight, free_group, preset};

    fn all_ratios_equal(r: &LevelReport, v: &Fraction) -> bool {
        r.ratio_rank_upper == *v && r.ratio_rank_lower == *v && r.ratio_beta1 == *v && r.ratio_b1p.values().all(|x| x == v)
    }

    #[test]
    fn free_farber_depth_two() {
        let p = free_group(2);
        let h = SubgroupSpec::new(vec![p.parse_word("a^2").unwrap(), p.parse_word("b").unwrap(), p.parse_word("a b a^-1").unwrap()]);
        let c = farber_chain(&p, &h, 2, &ChainCaps::default()).unwrap();
        assert_eq!(c.indices(), vec![2, 4]);
        assert!(c.levels[1].table.is_normal());
        c.verify_nested().unwrap();
        let g = gradient_sequence(&c, &[2, 3, 5], TietzeLevel::default());
        for r in g.reports() {
            assert!(all_ratios_equal(r, &Fraction::from_integer(1)));
        }
        assert_eq!(farber_defect(&c, &Word::generator(0), 2), Some(Fraction::zero()));
    }

    #[test]
    fn integers_farber_chain() {
        let z = Presentation::free(vec!["t"]).unwrap();
        let c = farber_chain(&z, &SubgroupSpec::new(vec![Word::power_of(0, 2)]), 3, &ChainCaps::default()).unwrap();
        // Δ₂ = ⟨t²⟩, Δ₃ = ⟨t⁶⟩; intersected with ⟨t²⟩
        assert_eq!(c.indices(), vec![2, 2, 6]);
        assert!(c.levels[1].stabilized);
        let one = farber_chain(&z, &SubgroupSpec::new(vec![Word::power_of(0, 2)]), 1, &ChainCaps::default()).unwrap();
        assert_eq!(one.indices(), vec![2]);
    }

    #[test]
    fn figure_eight_hnn() {
        let p = figure_eight();
        let c = hnn_chain(&p, "t", 4, &ChainCaps::default()).unwrap();
        assert_eq!(c.indices(), vec![1, 2, 3, 4]);
        let g = gradient_sequence(&c, &[2, 3, 5], TietzeLevel::default());
        for r in g.reports() {
            assert!(r.rank_upper <= 3);
            assert!(r.ratio_rank_upper <= Fraction::new(2, r.n as i64));
        }
    }

    #[test]
    fn abelian_hnn() {
        let p = preset("z2z2").unwrap().presentation;
        let c = hnn_chain(&p, "t", 2, &ChainCaps::default()).unwrap();
        assert_eq!(c.indices(), vec![1, 2]);
        assert!(matches!(hnn_chain(&p, "q", 2, &ChainCaps::default()), Err(ChainError::UnknownGenerator(_))));
    }

    #[test]
    fn lamplighter_levels() {
        let c = lamplighter_chain(3, 2, &ChainCaps::default()).unwrap();
        assert_eq!(c.indices(), vec![1, 2, 4]);
        let g = gradient_sequence(&c, &[2], TietzeLevel::default());
        let b: Vec<usize> = g.reports().map(|r| r.b1p[&2]).collect();
        assert_eq!(&b[1..], &[3, 5]);
        for n in 0..=2 {
            assert_eq!(farber_defect(&c, &Word::generator(0), n), Some(Fraction::from_integer(1)));
        }
    }

    #[test]
    fn bound_formula() {
        assert_eq!(fgnormal_bound(2i64, 3, 4, 5), Ratio::new(11, 10));
        assert_eq!(fgnormal_bound(2i64, 3, 1, 1), Ratio::from_integer(5));
        assert!(fgnormal_bound(2i64, 3, 1000, 1000) < Ratio::new(1, 100));
    }

    #[test]
    fn relator_has_zero_defect_complement() {
        let p = figure_eight();
        let c = hnn_chain(&p, "t", 3, &ChainCaps::default()).unwrap();
        let r = p.relators()[0].conjugate(&Word::generator(2));
        assert_eq!(farber_defect(&c, &r, 3), Some(Fraction::from_integer(1)));
    }
}
