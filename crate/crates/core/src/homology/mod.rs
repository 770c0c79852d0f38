//! Abelianization invariants by Smith normal form.

mod matrix;
mod snf;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use matrix::{Matrix, Overflow, Ring};
pub use snf::{smith_normal_form, smith_sparse, smith_with_transforms, SmithForm, SmithTransforms, SparseRow};

use crate::words::Presentation;

/// Default primes for mod-p Betti numbers.
pub const DEFAULT_PRIMES: [u64; 3] = [2, 3, 5];

/// Relation matrix: entry `(i, j)` is the exponent sum of generator `j` in
/// relator `i`.
pub fn abelianized_matrix<T: Ring + From<i64>>(p: &Presentation) -> Matrix<T> {
    let rows = p.relators().iter().map(|r| r.exponent_sums(p.ngens()).into_iter().map(T::from).collect()).collect();
    Matrix::from_rows(p.ngens(), rows)
}

fn sparse_rows(p: &Presentation) -> Vec<SparseRow<i64>> {
    p.relators()
        .iter()
        .map(|r| r.exponent_sums(p.ngens()).into_iter().enumerate().filter(|(_, v)| *v != 0).collect())
        .collect()
}

/// `H₁` of a presented group: free rank, torsion coefficients and mod-p
/// ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub beta1: usize,
    /// Invariant factors greater than 1, each dividing the next.
    pub torsion: Vec<BigInt>,
    /// `dim H₁(−; F_p)` for each requested prime.
    pub b1p: BTreeMap<u64, usize>,
}

impl HomologyReport {
    pub fn from_smith(ngens: usize, diagonal: &[BigInt], primes: &[u64]) -> Self {
        let beta1 = ngens - diagonal.len();
        let torsion: Vec<BigInt> = diagonal.iter().filter(|d| **d > BigInt::from(1)).cloned().collect();
        let b1p = primes
            .iter()
            .map(|&p| {
                let bp = BigInt::from(p);
                (p, beta1 + torsion.iter().filter(|d| (*d % &bp).is_zero()).count())
            })
            .collect();
        HomologyReport { beta1, torsion, b1p }
    }

    pub fn b1(&self, p: u64) -> Option<usize> {
        self.b1p.get(&p).copied()
    }

    /// Largest of `β₁` and the recorded `b₁,ₚ`: a lower bound for the rank.
    pub fn rank_lower_bound(&self) -> usize {
        self.b1p.values().copied().chain([self.beta1]).max().unwrap_or(0)
    }
}

/// Invariant factors of the relation matrix of `p`, using fixed-width
/// arithmetic when it suffices and arbitrary precision otherwise.
pub fn invariant_factors(p: &Presentation) -> Vec<BigInt> {
    let rows = sparse_rows(p);
    match smith_sparse(rows.clone(), p.ngens()) {
        Ok(f) => f.diagonal.into_iter().map(BigInt::from).collect(),
        Err(Overflow) => {
            let big = rows.into_iter().map(|r| r.into_iter().map(|(j, v)| (j, BigInt::from(v))).collect()).collect();
            smith_sparse(big, p.ngens()).expect("arbitrary precision cannot overflow").diagonal
        }
    }
}

pub fn homology_report(p: &Presentation, primes: &[u64]) -> HomologyReport {
    HomologyReport::from_smith(p.ngens(), &invariant_factors(p), primes)
}

/// Convenience for callers that need machine-size torsion values.
pub fn torsion_u64(r: &HomologyReport) -> Vec<Option<u64>> {
    r.torsion.iter().map(ToPrimitive::to_u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_presentation;

    fn pres(text: &str) -> Presentation {
        parse_presentation(text).unwrap().presentation
    }

    #[test]
    fn relation_matrices() {
        let fig8 = pres("gens a b t\nrel t^-1 a t b\nrel t^-1 b t b^-1 a^-1 b^-2\n");
        let m: Matrix<i64> = abelianized_matrix(&fig8);
        assert_eq!(m.row(0), &[1, 1, 0]);
        assert_eq!(m.row(1), &[-1, -2, 0]);
        let z2: Matrix<i64> = abelianized_matrix(&pres("gens a b\nrel a b a^-1 b^-1\n"));
        assert_eq!(z2.row(0), &[0, 0]);
        let free: Matrix<i64> = abelianized_matrix(&pres("gens a b\n"));
        assert_eq!((free.rows(), free.cols()), (0, 2));
    }

    #[test]
    fn reports() {
        let z2 = homology_report(&pres("gens a b\nrel a b a^-1 b^-1\n"), &DEFAULT_PRIMES);
        assert_eq!(z2.beta1, 2);
        assert!(z2.torsion.is_empty());
        assert!(z2.b1p.values().all(|&v| v == 2));

        let s3 = homology_report(&pres("gens s r\nrel s^2\nrel r^3\nrel s r s r\n"), &DEFAULT_PRIMES);
        assert_eq!(s3.beta1, 0);
        assert_eq!(s3.torsion, vec![BigInt::from(2)]);
        assert_eq!(s3.b1(2), Some(1));
        assert_eq!(s3.b1(3), Some(0));

        let fig8 = homology_report(&pres("gens a b t\nrel t^-1 a t b\nrel t^-1 b t b^-1 a^-1 b^-2\n"), &DEFAULT_PRIMES);
        assert_eq!(fig8.beta1, 1);
        assert!(fig8.torsion.is_empty());
    }
}
