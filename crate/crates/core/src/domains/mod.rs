//! Concrete pattern domains and their partial orders.
//!
//! Labels are unique within a sequence and within a graph, so every order
//! check here is a direct, polynomial comparison: there is never more than one
//! way to embed one pattern in another.

mod graph;
mod itemset;
mod sequence;

pub use graph::{graph_leq, validate_class, GraphClass, LabelledGraph};
pub(crate) use itemset::is_sorted_subset;
pub use itemset::{itemset_leq, Itemset};
pub use sequence::{sequence_leq, Sequence};
