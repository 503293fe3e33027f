//! Exhaustive reference answers for small instances.
//!
//! The oracle lists every sub-pattern of every transaction (all subsets, all
//! subsequences, all connected subgraphs), counts support by comparing each
//! one against every transaction, and keeps the maximal feasible frequent
//! ones. It shares nothing with the miner beyond the pattern types.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::domains::{Itemset, LabelledGraph, Sequence};
use crate::error::{Error, Result};
use crate::feasibility::Predicate;
use crate::model::{Database, Pattern, SupportThreshold};

/// Largest label universe the oracle accepts.
pub const MAX_UNIVERSE: usize = 16;
/// Largest transaction size (items, events, vertices or edges) it accepts.
pub const MAX_TRANSACTION: usize = 16;

/// Pattern counts of one size.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SizeCounts {
    pub size: usize,
    pub frequent: usize,
    pub feasible_frequent: usize,
}

fn guard(db: &Database) -> Result<()> {
    if db.universe().len() > MAX_UNIVERSE {
        return Err(Error::OracleGuard(format!(
            "{} labels, at most {MAX_UNIVERSE} allowed",
            db.universe().len()
        )));
    }
    for (i, t) in db.transactions().iter().enumerate() {
        let size = match t {
            Pattern::Graph(g) => g.vertex_count().max(g.edge_count()),
            other => other.size(),
        };
        if size > MAX_TRANSACTION {
            return Err(Error::OracleGuard(format!(
                "transaction {i} has size {size}, at most {MAX_TRANSACTION} allowed"
            )));
        }
    }
    Ok(())
}

fn masks<T: Copy>(xs: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u32..1 << xs.len()).map(move |m| {
        xs.iter()
            .enumerate()
            .filter(|(i, _)| m & (1 << i) != 0)
            .map(|(_, &x)| x)
            .collect()
    })
}

fn connected_subgraphs(g: &LabelledGraph) -> Vec<Pattern> {
    let vs = g.vertices();
    let es = g.edges();
    let at = |l| vs.binary_search(&l).expect("endpoint is a vertex");
    let ends: Vec<(usize, usize)> = es.iter().map(|&(a, b)| (at(a), at(b))).collect();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut stack: Vec<(u32, u32)> = (0..vs.len()).map(|v| (1u32 << v, 0u32)).collect();
    seen.extend(stack.iter().copied());
    while let Some((vmask, emask)) = stack.pop() {
        for (e, &(a, b)) in ends.iter().enumerate() {
            if emask & (1 << e) != 0 || (vmask & (1 << a) == 0 && vmask & (1 << b) == 0) {
                continue;
            }
            let next = (vmask | 1 << a | 1 << b, emask | 1 << e);
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    let mut out: Vec<Pattern> = seen
        .into_iter()
        .map(|(vmask, emask)| {
            let vertices = (0..vs.len())
                .filter(|v| vmask & (1 << v) != 0)
                .map(|v| vs[v]);
            let edges = (0..es.len())
                .filter(|e| emask & (1 << e) != 0)
                .map(|e| es[e]);
            LabelledGraph::new(g.is_directed(), vertices, edges)
                .expect("sub-structure of a valid graph")
                .into()
        })
        .collect();
    out.sort();
    out
}

/// Every sub-pattern of `t`; for graphs, every connected subgraph.
pub fn subpatterns(t: &Pattern) -> Vec<Pattern> {
    match t {
        Pattern::Items(s) => masks(s.items()).map(|xs| Itemset::new(xs).into()).collect(),
        Pattern::Pairs(s) => masks(s.items()).map(|xs| Itemset::new(xs).into()).collect(),
        Pattern::Sequence(s) => masks(s.events())
            .map(|xs| {
                Sequence::new(xs)
                    .expect("subsequence of a valid sequence")
                    .into()
            })
            .collect(),
        Pattern::Graph(g) => connected_subgraphs(g),
    }
}

/// Candidate patterns of one database with their exact supports.
pub struct OracleTable {
    patterns: Vec<(Pattern, usize)>,
}

impl OracleTable {
    pub fn build(db: &Database) -> Result<Self> {
        guard(db)?;
        let distinct: BTreeSet<Pattern> = db
            .transactions()
            .par_iter()
            .map(subpatterns)
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        let patterns = distinct
            .into_iter()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|p| {
                let support = db.support(&p)?;
                Ok((p, support))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OracleTable { patterns })
    }

    pub fn patterns(&self) -> &[(Pattern, usize)] {
        &self.patterns
    }

    /// Feasible frequent patterns with their supports, in canonical order.
    pub fn feasible_frequent(
        &self,
        tau: SupportThreshold,
        phi: &Predicate,
    ) -> Result<Vec<(Pattern, usize)>> {
        let flags = self
            .patterns
            .par_iter()
            .map(|(p, s)| Ok(*s >= tau.get() && phi.eval(p)?))
            .collect::<Result<Vec<bool>>>()?;
        Ok(self
            .patterns
            .iter()
            .zip(flags)
            .filter(|(_, f)| *f)
            .map(|(p, _)| p.clone())
            .collect())
    }

    pub fn max(&self, tau: SupportThreshold, phi: &Predicate) -> Result<Vec<Pattern>> {
        let mut candidates: Vec<Pattern> = self
            .feasible_frequent(tau, phi)?
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        candidates.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| a.cmp(b)));
        let mut maximal: Vec<Pattern> = Vec::new();
        for p in candidates {
            let mut dominated = false;
            for m in &maximal {
                if p.lt(m)? {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                maximal.push(p);
            }
        }
        maximal.sort();
        Ok(maximal)
    }

    /// Per-size counts of frequent and feasible frequent patterns.
    pub fn counts_by_size(
        &self,
        tau: SupportThreshold,
        phi: &Predicate,
    ) -> Result<Vec<SizeCounts>> {
        let mut by_size: BTreeMap<usize, SizeCounts> = BTreeMap::new();
        for (p, s) in &self.patterns {
            if *s < tau.get() {
                continue;
            }
            let entry = by_size.entry(p.size()).or_insert(SizeCounts {
                size: p.size(),
                frequent: 0,
                feasible_frequent: 0,
            });
            entry.frequent += 1;
            if phi.eval(p)? {
                entry.feasible_frequent += 1;
            }
        }
        Ok(by_size.into_values().collect())
    }
}

/// Maximal feasible frequent patterns of `db`, in canonical order.
pub fn oracle_max(db: &Database, tau: SupportThreshold, phi: &Predicate) -> Result<Vec<Pattern>> {
    OracleTable::build(db)?.max(tau, phi)
}

/// Every feasible frequent pattern with its support, in canonical order.
pub fn oracle_all_feasible_frequent(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
) -> Result<Vec<(Pattern, usize)>> {
    OracleTable::build(db)?.feasible_frequent(tau, phi)
}

pub fn oracle_counts_by_size(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
) -> Result<Vec<SizeCounts>> {
    OracleTable::build(db)?.counts_by_size(tau, phi)
}

/// Exhaustive maximality check of one pattern.
pub fn oracle_is_maximal_feasible(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    p: &Pattern,
) -> Result<bool> {
    let table = OracleTable::build(db)?;
    let candidates: Vec<&Pattern> = table.patterns().iter().map(|(q, _)| q).collect();
    crate::model::is_maximal_feasible(p, db, tau, phi, candidates)
}
