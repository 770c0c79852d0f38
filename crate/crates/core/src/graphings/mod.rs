//! Finite-level graphings on the cosets of a chain level: the coset tree,
//! the graphing algebra, L-graphing checks and rank bounds.

mod algebra;
mod labeled;
mod minimize;
mod tree;

pub use algebra::{Graphing, GraphingEntry, GraphingError, DEFAULT_LABEL_CAP};
pub use labeled::{check_l_graphing, graphing_from_generators, is_l_graphing, rank_bound, to_labeled_graph, LCheck, LabeledGraph, LoopData};
pub use minimize::{minimize_graphing, MinimizeBudget, Minimized};
pub use tree::{build_coset_tree, CosetTree, TreeLevel};
