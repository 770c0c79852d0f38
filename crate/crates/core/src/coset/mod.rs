//! Finite-index subgroups as coset tables: enumeration, low-index search,
//! intersections and normal cores.

mod enumerate;
mod low_index;
mod ops;
mod table;

pub use enumerate::{enumerate, EnumerateError, DEFAULT_COSET_CAP};
pub use low_index::{counts_by_index, low_index, LowIndexError, DEFAULT_NODE_CAP};
pub use ops::{intersect, normal_core, CoreError, DEFAULT_IMAGE_CAP};
pub use table::{CosetTable, Provenance, TableError, Violation};
