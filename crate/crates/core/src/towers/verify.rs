use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::build::Tower;
use super::cover::{CoverGraph, Radius};
use super::group::FiniteGroup;
use super::predict::{limits, predict_stats, GroupStats, Limits};
use super::TowerError;
use crate::coset::enumerate;
use crate::fraction::Fraction;
use crate::presets::free_product_with_z;
use crate::subgroup::{rank_bounds, schreier_generators, TietzeLevel};
use crate::words::{Presentation, SubgroupSpec};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPrediction {
    pub rank: Fraction,
    pub b1p: Fraction,
    pub beta1: Fraction,
    /// `n − np + 1`.
    pub beta1_alt: Fraction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Computed {
    pub index: usize,
    pub beta1: usize,
    pub b1p: usize,
    pub rank_lower: usize,
    pub rank_upper: usize,
}

/// One predicted-versus-computed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub predicted: String,
    pub computed: String,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevelReport {
    pub j: usize,
    pub n: usize,
    pub p: usize,
    pub fixed: usize,
    pub regular: usize,
    pub mu: Fraction,
    pub radius: Radius,
    /// `n = fixed + regular·|A|`.
    pub orbit_sum: bool,
    pub predicted: LevelPrediction,
    pub computed: Computed,
    pub comparisons: Vec<Comparison>,
    /// Predicted `(d − 1)/n`, `(b₁,ₚ − 1)/n`, `(β₁ − 1)/n`.
    pub ratios: [Fraction; 3],
    pub ratios_strictly_ordered: bool,
}

impl TowerLevelReport {
    pub fn comparison(&self, quantity: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.quantity == quantity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub group: String,
    pub order: usize,
    pub rank: usize,
    pub prime: u64,
    pub mu_target: Fraction,
    pub lift: usize,
    /// Limits of the three ratios at `mu_target`.
    pub limits: [Fraction; 3],
    pub limits_strictly_ordered: bool,
    /// Every level's subgroup lies in the previous one.
    pub nested: bool,
    pub levels: Vec<TowerLevelReport>,
}

/// Schreier generators of the stabilizer of point 0, after checking by
/// enumeration that they generate a subgroup of index `n`.
pub fn subgroup_from_cover(c: &CoverGraph, ambient: &Presentation, cap: usize) -> Result<SubgroupSpec, TowerError> {
    let t = c.table()?;
    let spec = SubgroupSpec::new(schreier_generators(&t).generators);
    let index = enumerate(ambient, &spec, cap)?.index();
    if index != c.n {
        return Err(TowerError::Invalid(format!("stabilizer generators have index {index}, expected {}", c.n)));
    }
    Ok(spec)
}

fn stats(a: &FiniteGroup, prime: u64) -> GroupStats<BigInt> {
    GroupStats { order: a.order.into(), rank: a.rank.into(), b1p: a.b1p.get(&prime).copied().unwrap_or(0).into() }
}

fn fr(r: Rational) -> Fraction {
    Fraction(r)
}

fn cmp(quantity: &str, predicted: &Fraction, computed: usize) -> Comparison {
    Comparison { quantity: quantity.into(), predicted: predicted.to_string(), computed: computed.to_string(), matches: *predicted == Fraction::from_integer(computed) }
}

/// Compute index, homology and rank bounds of the stabilizer of a cover
/// and compare them with the closed forms.
pub fn verify_level(j: usize, c: &CoverGraph, a: &FiniteGroup, prime: u64, level: TietzeLevel, cap: usize) -> Result<TowerLevelReport, TowerError> {
    let ambient = free_product_with_z(&a.presentation);
    let (fixed, regular) = c.layout(a.order).ok_or_else(|| TowerError::Invalid(format!("level {j}: bad orbit layout")))?;
    let p = fixed + regular;
    let mu = Rational::new(fixed.into(), p.into());
    let spec = subgroup_from_cover(c, &ambient, cap)?;
    let table = c.table()?;
    let bounds = rank_bounds(&ambient, &table, &[prime], level)?;
    let computed = Computed {
        index: c.n,
        beta1: bounds.homology.beta1,
        b1p: bounds.homology.b1p[&prime],
        rank_lower: bounds.lower,
        rank_upper: bounds.upper,
    };
    debug_assert!(spec.generators.iter().all(|w| table.contains(w)));
    let pred = predict_stats(&stats(a, prime), c.n.into(), p.into(), &mu).map_err(|e| TowerError::Invalid(e.to_string()))?;
    let predicted = LevelPrediction { rank: fr(pred.rank.clone()), b1p: fr(pred.b1p.clone()), beta1: fr(pred.beta1.clone()), beta1_alt: fr(pred.beta1_alt.clone()) };
    let in_interval = predicted.rank >= Fraction::from_integer(computed.rank_lower) && predicted.rank <= Fraction::from_integer(computed.rank_upper);
    let comparisons = vec![
        cmp("index", &Fraction::from_integer(c.n), computed.index),
        cmp("b1p", &predicted.b1p, computed.b1p),
        cmp("beta1 = n-p+1", &predicted.beta1, computed.beta1),
        cmp("beta1 = n-np+1", &predicted.beta1_alt, computed.beta1),
        Comparison {
            quantity: "rank in [lower, upper]".into(),
            predicted: predicted.rank.to_string(),
            computed: format!("[{}, {}]", computed.rank_lower, computed.rank_upper),
            matches: in_interval,
        },
    ];
    let n = Rational::from_integer(c.n.into());
    let one = Rational::from_integer(1.into());
    let ratio = |x: &Rational| Fraction((x - &one) / &n);
    let ratios = [ratio(&pred.rank), ratio(&pred.b1p), ratio(&pred.beta1)];
    let ratios_strictly_ordered = ratios[0] > ratios[1] && ratios[1] > ratios[2];
    Ok(TowerLevelReport {
        j,
        n: c.n,
        p,
        fixed,
        regular,
        mu: Fraction(mu),
        radius: c.injectivity_radius(super::cover::DEFAULT_RADIUS_CAP),
        orbit_sum: c.n == fixed + regular * a.order,
        predicted,
        computed,
        comparisons,
        ratios,
        ratios_strictly_ordered,
    })
}

/// Verify every level concurrently; levels stay in order.
pub fn tower_report(tower: &Tower, a: &FiniteGroup, prime: u64, level: TietzeLevel, cap: usize) -> Result<TowerReport, TowerError> {
    let levels: Result<Vec<TowerLevelReport>, TowerError> =
        tower.levels.par_iter().enumerate().map(|(j, c)| verify_level(j, c, a, prime, level, cap)).collect();
    let lim: Limits<BigInt> = limits(&stats(a, prime), &tower.mu_target.0);
    let nested = (0..tower.levels.len().saturating_sub(1)).all(|j| tower.block_certificate(j)) && tower.to_chain(a).is_ok();
    Ok(TowerReport {
        group: a.presentation.canonical_text(),
        order: a.order,
        rank: a.rank,
        prime,
        mu_target: tower.mu_target.clone(),
        lift: tower.lift,
        limits_strictly_ordered: lim.strictly_ordered(),
        limits: [fr(lim.rank), fr(lim.b1p), fr(lim.beta1)],
        nested,
        levels: levels?,
    })
}
