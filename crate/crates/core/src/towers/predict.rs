use num_integer::Integer;
use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Invariants of the finite factor `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStats<T> {
    pub order: T,
    pub rank: T,
    pub b1p: T,
}

/// Limits of `(x − 1)/n` along a tower whose fixed fraction tends to `μ`.
#[derive(Clone, Debug)]
pub struct Limits<T: Clone> {
    pub rank: Ratio<T>,
    pub b1p: Ratio<T>,
    pub beta1: Ratio<T>,
}

#[derive(Clone, Debug)]
pub struct Prediction<T: Clone> {
    /// `n − p + μp·d(A) + 1`, from the free product decomposition.
    pub rank: Ratio<T>,
    /// `n − p + μp·b₁,ₚ(A) + 1`.
    pub b1p: Ratio<T>,
    /// `n − p + 1`.
    pub beta1: Ratio<T>,
    /// `n − np + 1`, the alternative β₁ expression, kept for comparison.
    pub beta1_alt: Ratio<T>,
    pub limits: Limits<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictError {
    #[error("n = {n} is not p·(μ + (1−μ)|A|) = {expected}")]
    Inconsistent { n: String, expected: String },
}

/// Limits for fixed fraction `mu`.
pub fn limits<T: Integer + Clone>(a: &GroupStats<T>, mu: &Ratio<T>) -> Limits<T> {
    let one = Ratio::<T>::one();
    let per_vertex = mu.clone() + (one.clone() - mu.clone()) * Ratio::from_integer(a.order.clone());
    let rank = one.clone() + (mu.clone() * Ratio::from_integer(a.rank.clone()) - one.clone()) / per_vertex.clone();
    let b1p = one.clone() + (mu.clone() * Ratio::from_integer(a.b1p.clone()) - one.clone()) / per_vertex.clone();
    let beta1 = one.clone() - one / per_vertex;
    Limits { rank, b1p, beta1 }
}

/// Closed-form rank and homology of the stabilizer of a cover with `n`
/// points, `p` vertices and fixed fraction `mu`.
pub fn predict_stats<T: Integer + Clone + ToString>(a: &GroupStats<T>, n: T, p: T, mu: &Ratio<T>) -> Result<Prediction<T>, PredictError> {
    let one = Ratio::<T>::one();
    let nr = Ratio::from_integer(n.clone());
    let pr = Ratio::from_integer(p.clone());
    let expected = pr.clone() * (mu.clone() + (one.clone() - mu.clone()) * Ratio::from_integer(a.order.clone()));
    if expected != nr {
        let show = |r: &Ratio<T>| format!("{}/{}", r.numer().to_string(), r.denom().to_string());
        return Err(PredictError::Inconsistent { n: n.to_string(), expected: show(&expected) });
    }
    let free_part = nr.clone() - pr.clone() + one.clone();
    let fixed = mu.clone() * pr.clone();
    Ok(Prediction {
        rank: free_part.clone() + fixed.clone() * Ratio::from_integer(a.rank.clone()),
        b1p: free_part.clone() + fixed * Ratio::from_integer(a.b1p.clone()),
        beta1: free_part,
        beta1_alt: nr.clone() - nr * pr + one,
        limits: limits(a, mu),
    })
}

impl<T: Integer + Clone> Limits<T> {
    /// Strict ordering `rank > b₁,ₚ > β₁`.
    pub fn strictly_ordered(&self) -> bool {
        self.rank > self.b1p && self.b1p > self.beta1
    }
}
