//! Maximal feasible frequent pattern mining.
//!
//! [`mine_max_ffis`] runs a levelwise search over an itemset database. The
//! feasibility predicate is split with [`Predicate::pruning_split`]: its
//! split-stable part restricts candidate generation (for
//! [`Predicate::ConnectedEdges`], only connected candidates are built and
//! counted), and the remainder filters the found sets before maximal ones are
//! extracted.
//!
//! Other domains are mined through a reduction to itemsets
//! ([`mine_via_reduction`]).
//!
//! ```
//! use maxpres::{mine_max_ffis, Database, Predicate, SupportThreshold};
//!
//! let db = Database::itemsets([vec![1, 2], vec![1, 2], vec![2, 3]])?;
//! let tau = SupportThreshold::new(2)?;
//! let result = mine_max_ffis(&db, tau, &Predicate::Always)?;
//! assert_eq!(result.maximal_strings(), ["{1,2}"]);
//! # Ok::<(), maxpres::Error>(())
//! ```

mod levelwise;

use std::collections::BTreeSet;
use std::fmt;

use crate::domains::Itemset;
use crate::error::{Error, Result};
use crate::feasibility::Predicate;
use crate::model::{Database, Domain, Item, Label, LabelPair, Pattern, SupportThreshold};
use crate::reductions::Reduction;

use levelwise::{filter_sets, maximal_by_scan, Generation, Ids, Instance};

/// Counts for one itemset size. `candidates` is the number of sets whose
/// support was counted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct LevelStats {
    pub level: usize,
    pub candidates: usize,
    pub frequent: usize,
    pub feasible_frequent: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum PruneMode {
    /// Prune with the split-stable part of the predicate.
    #[default]
    Auto,
    /// Mine by frequency alone and apply the whole predicate afterwards.
    PostFilter,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MiningResult {
    /// Maximal feasible frequent patterns in canonical order.
    pub maximal: Vec<Pattern>,
    pub stats: Vec<LevelStats>,
    pub tau: SupportThreshold,
    pub phi: Predicate,
}

impl MiningResult {
    pub fn len(&self) -> usize {
        self.maximal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    pub fn maximal_strings(&self) -> Vec<String> {
        self.maximal.iter().map(Pattern::to_string).collect()
    }
}

impl fmt::Display for MiningResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.maximal {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

struct Dense<I> {
    items: Vec<I>,
    transactions: Vec<Ids>,
    labels: Vec<[u32; 2]>,
    label_count: usize,
}

impl<I: Item> Dense<I> {
    fn build(db: &Database) -> Result<Self> {
        let sets: Vec<&Itemset<I>> = db
            .transactions()
            .iter()
            .map(|t| I::view(t).ok_or_else(|| Error::mismatch(db.domain(), t.kind())))
            .collect::<Result<_>>()?;
        let items: Vec<I> = sets
            .iter()
            .flat_map(|s| s.items().iter().copied())
            .collect::<BTreeSet<I>>()
            .into_iter()
            .collect();
        let id = |x: &I| items.binary_search(x).expect("item collected above") as u32;
        let transactions = sets
            .iter()
            .map(|s| s.items().iter().map(id).collect())
            .collect();
        let universe: Vec<Label> = db.universe().iter().copied().collect();
        let label_id = |l: Label| universe.binary_search(&l).expect("label in universe") as u32;
        let labels = items
            .iter()
            .map(|&x| {
                let [a, b] = x.labels();
                [label_id(a), label_id(b)]
            })
            .collect();
        Ok(Dense {
            items,
            transactions,
            labels,
            label_count: universe.len(),
        })
    }

    fn pattern(&self, ids: &[u32]) -> Pattern {
        I::into_pattern(Itemset::new(ids.iter().map(|&i| self.items[i as usize])))
    }
}

fn plan(phi: &Predicate, mode: PruneMode) -> (Generation, Option<Predicate>) {
    match mode {
        PruneMode::PostFilter => (Generation::Unconstrained, Some(phi.clone())),
        PruneMode::Auto => {
            let (prune, residual) = phi.pruning_split();
            let generation = match prune {
                _ if residual.is_some() && phi.implies_tournament_itemset() => {
                    Generation::TournamentPrefix
                }
                _ if residual.is_some() && phi.implies_graph_itemset() => Generation::MarkerPrefix,
                Predicate::ConnectedEdges => Generation::Connected,
                _ => Generation::Unconstrained,
            };
            (generation, residual)
        }
    }
}

struct Run {
    maximal: Vec<Pattern>,
    stats: Vec<LevelStats>,
    feasible: Vec<(Pattern, usize)>,
}

fn run<I: Item>(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    mode: PruneMode,
    keep_all: bool,
) -> Result<Run> {
    let dense = Dense::<I>::build(db)?;
    let (generation, residual) = plan(phi, mode);
    if generation != Generation::Unconstrained && db.domain() != Domain::PairItemset {
        return Err(Error::mismatch(Domain::PairItemset, db.domain()));
    }
    let instance = Instance {
        transactions: &dense.transactions,
        items: dense.items.len(),
        labels: &dense.labels,
        label_count: dense.label_count,
        tau: tau.get(),
        generation,
    };
    let found = instance.search();
    let mut stats = found.stats.clone();

    let all: Vec<Ids> = found.all_sets().cloned().collect();
    let feasible_sets = match &residual {
        None => all,
        Some(r) => filter_sets(all, |s| r.eval(&dense.pattern(s)))?,
    };
    for s in &feasible_sets {
        stats[s.len() - 1].feasible_frequent += 1;
    }
    let feasible = if keep_all {
        let kept: BTreeSet<&Ids> = feasible_sets.iter().collect();
        found
            .support_of()
            .filter(|(s, _)| kept.contains(s))
            .map(|(s, n)| (dense.pattern(s), n))
            .collect()
    } else {
        Vec::new()
    };
    let maximal_ids = match residual {
        None => found.maximal_by_extension(),
        Some(_) => maximal_by_scan(feasible_sets, dense.items.len()),
    };
    let mut maximal: Vec<Pattern> = maximal_ids.iter().map(|s| dense.pattern(s)).collect();
    if maximal.is_empty() {
        if let Some(empty) = db.domain().empty_pattern() {
            if db.len() >= tau.get() && phi.eval(&empty)? {
                maximal.push(empty);
            }
        }
    }
    maximal.sort();
    Ok(Run {
        maximal,
        stats,
        feasible,
    })
}

fn run_itemsets(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    mode: PruneMode,
    keep_all: bool,
) -> Result<Run> {
    match db.domain() {
        Domain::Itemset => run::<Label>(db, tau, phi, mode, keep_all),
        Domain::PairItemset => run::<LabelPair>(db, tau, phi, mode, keep_all),
        other => Err(Error::mismatch("itemset or pair itemset", other)),
    }
}

/// All maximal feasible frequent itemsets, pruning with the split-stable part
/// of `phi`.
pub fn mine_max_ffis(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
) -> Result<MiningResult> {
    mine_max_ffis_with(db, tau, phi, PruneMode::Auto)
}

pub fn mine_max_ffis_with(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    mode: PruneMode,
) -> Result<MiningResult> {
    let run = run_itemsets(db, tau, phi, mode, false)?;
    Ok(MiningResult {
        maximal: run.maximal,
        stats: run.stats,
        tau,
        phi: phi.clone(),
    })
}

/// Every non-empty feasible frequent itemset with its support, in canonical
/// order.
pub fn mine_all_feasible_frequent(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    mode: PruneMode,
) -> Result<Vec<(Pattern, usize)>> {
    let mut all = run_itemsets(db, tau, phi, mode, true)?.feasible;
    all.sort();
    Ok(all)
}

/// Mines any domain: itemset databases directly, everything else through the
/// reduction chain that ends in an itemset domain.
pub fn mine(db: &Database, tau: SupportThreshold, phi: &Predicate) -> Result<MiningResult> {
    if db.domain().is_itemset() {
        mine_max_ffis(db, tau, phi)
    } else {
        mine_via_reduction(&Reduction::identity(), db, tau, phi)
    }
}

/// Reduces `db` with `r`, extended as needed until it reaches an itemset
/// domain, mines with the induced feasibility and lifts the result back.
///
/// The empty source pattern, where the chain cannot represent it, is decided
/// directly: it is maximal when nothing else is feasible and frequent.
/// Empty source transactions are then left out of the reduced database; they
/// contain no other pattern.
pub fn mine_via_reduction(
    r: &Reduction,
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
) -> Result<MiningResult> {
    if !r.accepts(db.domain()) {
        return Err(Error::mismatch(
            r.source_domain().expect("identity accepts every domain"),
            db.domain(),
        ));
    }
    let full = r.complete_to_itemsets(db.domain())?;
    let empty = db.domain().empty_pattern();
    let empty_dropped = match &empty {
        Some(e) => full.forward(e).is_err(),
        None => false,
    };
    let source = if empty_dropped {
        let kept = db
            .transactions()
            .iter()
            .filter(|t| !t.is_empty())
            .cloned()
            .collect();
        Database::new(db.domain(), kept)?
    } else {
        db.clone()
    };
    let reduced = full.reduce_database(&source)?;
    let target_phi = full.induced_feasibility(phi);
    let target = mine_max_ffis(&reduced, tau, &target_phi)?;
    let mut maximal = full.lift_results(&target.maximal)?;
    if maximal.is_empty() && empty_dropped {
        let e = empty.expect("checked above");
        if db.len() >= tau.get() && phi.eval(&e)? {
            maximal.push(e);
        }
    }
    Ok(MiningResult {
        maximal,
        stats: target.stats,
        tau,
        phi: phi.clone(),
    })
}

fn checked_max(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    known: &[Pattern],
) -> Result<Vec<Pattern>> {
    let maximal = mine(db, tau, phi)?.maximal;
    for k in known {
        db.check_pattern(k)?;
        if maximal.binary_search(k).is_err() {
            return Err(Error::NotMaximal {
                pattern: k.to_string(),
            });
        }
    }
    Ok(maximal)
}

/// The canonically smallest maximal feasible frequent pattern outside
/// `known`. Every element of `known` must itself be maximal.
pub fn extend(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    known: &[Pattern],
) -> Result<Option<Pattern>> {
    let maximal = checked_max(db, tau, phi, known)?;
    Ok(maximal.into_iter().find(|p| !known.contains(p)))
}

pub fn extendible(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    known: &[Pattern],
) -> Result<bool> {
    Ok(extend(db, tau, phi, known)?.is_some())
}

/// As [`extendible`], for callers that promise fewer than `k` known patterns.
pub fn extendible_k(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    known: &[Pattern],
    k: usize,
) -> Result<bool> {
    if known.len() >= k {
        return Err(Error::KnownTooLarge {
            known: known.len(),
            k,
        });
    }
    extendible(db, tau, phi, known)
}

pub fn count_maximal(db: &Database, tau: SupportThreshold, phi: &Predicate) -> Result<usize> {
    Ok(mine(db, tau, phi)?.len())
}
