//! Rank gradients of subgroup chains in finitely presented groups.
//!
//! The crate enumerates finite-index subgroups, bounds their ranks from
//! below (abelianization) and above (Reidemeister–Schreier plus Tietze),
//! builds chains of subgroups and their gradient sequences, and realizes
//! finite-level graphings and covering towers of free products `A ∗ ℤ`.
//!
//! Exact arithmetic is used throughout. Linear algebra and the tower
//! predictions are generic over the integer type; the aliases below fix
//! the arbitrary-precision choice used by the rest of the crate.

pub mod chains;
pub mod coset;
pub mod fraction;
pub mod graphings;
pub mod homology;
pub mod presets;
pub mod subgroup;
pub mod towers;
pub mod words;

/// Arbitrary-precision integer used for homology.
pub type Integer = num_bigint::BigInt;
/// Exact rational used for measures and ratios.
pub type Rational = num_rational::BigRational;

pub use fraction::Fraction;
pub use coset::{enumerate, intersect, low_index, normal_core, CosetTable};
pub use words::{free_reduce, parse_presentation, Letter, Presentation, SubgroupSpec, Word};
