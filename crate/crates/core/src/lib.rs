//! Maximal frequent pattern mining across itemsets, sequences and labelled
//! graphs, built on maximality-preserving reductions to feasible frequent
//! itemset mining.
//!
//! A [`Database`] holds transactions of one [`Domain`]. [`mine`] returns the
//! maximal patterns that occur in at least `τ` transactions and satisfy a
//! feasibility [`Predicate`]. Itemset databases are mined directly by a
//! levelwise search; sequence and graph databases are mapped to itemsets by a
//! [`Reduction`], mined there, and mapped back. Every answer can be checked
//! against the exhaustive [`oracle`].
//!
//! ```
//! use maxpres::{mine, Database, Domain, GraphClass, LabelledGraph, Label, Pattern, Predicate, SupportThreshold};
//!
//! let l = |x| Label::new(x).unwrap();
//! let triangle = LabelledGraph::from_edges(false, [(l(1), l(2)), (l(2), l(3)), (l(1), l(3))])?;
//! let path = LabelledGraph::from_edges(false, [(l(1), l(2)), (l(2), l(3))])?;
//! let db = Database::new(
//!     Domain::Graph(GraphClass::General),
//!     vec![triangle.into(), path.clone().into()],
//! )?;
//! let result = mine(&db, SupportThreshold::new(2)?, &Predicate::Always)?;
//! assert_eq!(result.maximal, vec![Pattern::from(path)]);
//! # Ok::<(), maxpres::Error>(())
//! ```

mod bitset;
pub mod domains;
mod error;
pub mod feasibility;
pub mod harness;
pub mod miner;
mod model;
pub mod oracle;
pub mod reductions;

pub use domains::{GraphClass, Itemset, LabelledGraph, Sequence};
pub use error::{Error, ErrorKind, Result};
pub use feasibility::{connected_edge_itemset, mergeable, EdgeItemset, Predicate};
pub use miner::{
    count_maximal, extend, extendible, extendible_k, mine, mine_all_feasible_frequent,
    mine_max_ffis, mine_max_ffis_with, mine_via_reduction, LevelStats, MiningResult, PruneMode,
};
pub use model::{
    is_maximal_feasible, Database, Domain, Item, Label, LabelPair, Pattern, SupportThreshold,
};
pub use oracle::{oracle_all_feasible_frequent, oracle_counts_by_size, oracle_max, SizeCounts};
pub use reductions::{lift_to_ffbp, FeasibleReduction, Reduction, ReductionSpec, Step, StepKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/patterns.md")]
    mod patterns {}
    #[doc = include_str!("../../../book/src/feasibility.md")]
    mod feasibility {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    mod reductions {}
    #[doc = include_str!("../../../book/src/mining.md")]
    mod mining {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
