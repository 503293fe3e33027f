//! Levelwise search over dense item ids with vertical (tidset) support
//! counting.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::domains::is_sorted_subset;
use crate::error::Result;
use crate::feasibility::{connected_pairs, marker_prefix_pairs, tournament_prefix_pairs};

use super::LevelStats;

/// Sets of ids, sorted ascending.
pub(crate) type Ids = Vec<u32>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Generation {
    /// Plain Apriori: every candidate has all its subsets frequent.
    Unconstrained,
    /// Only connected edge itemsets are generated and counted.
    Connected,
    /// Connected edge itemsets whose markers are a prefix of their endpoint
    /// labels; enough when only whole-graph itemsets can be feasible.
    MarkerPrefix,
    /// Tournament itemsets grown vertex by vertex; enough when only images
    /// of sequences can be feasible.
    TournamentPrefix,
}

pub(crate) struct Instance<'a> {
    pub transactions: &'a [Ids],
    pub items: usize,
    /// Per item, the dense label ids of its two components.
    pub labels: &'a [[u32; 2]],
    pub label_count: usize,
    pub tau: usize,
    pub generation: Generation,
}

struct Level {
    sets: Vec<Ids>,
    tids: Vec<BitSet>,
    index: HashMap<Ids, usize>,
}

impl Level {
    fn new(sets: Vec<Ids>, tids: Vec<BitSet>) -> Self {
        let index = sets
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        Level { sets, tids, index }
    }
}

pub(crate) struct Found {
    levels: Vec<Level>,
    pub stats: Vec<LevelStats>,
}

impl Instance<'_> {
    fn feasible(&self, set: &[u32]) -> bool {
        let pairs = set
            .iter()
            .map(|&i| (self.labels[i as usize][0], self.labels[i as usize][1]));
        match self.generation {
            Generation::Unconstrained => true,
            Generation::Connected => connected_pairs(pairs),
            Generation::MarkerPrefix => marker_prefix_pairs(pairs),
            Generation::TournamentPrefix => tournament_prefix_pairs(pairs),
        }
    }

    fn label_mask(&self, set: &[u32]) -> BitSet {
        let mut mask = BitSet::new(self.label_count);
        for &i in set {
            for l in self.labels[i as usize] {
                mask.insert(l as usize);
            }
        }
        mask
    }

    /// All frequent sets that pass the generation constraint, level by level.
    pub fn search(&self) -> Found {
        let n = self.transactions.len();
        let mut item_tids = vec![BitSet::new(n); self.items];
        for (t, row) in self.transactions.iter().enumerate() {
            for &i in row {
                item_tids[i as usize].insert(t);
            }
        }
        let singles: Vec<u32> = (0..self.items as u32)
            .filter(|&i| self.feasible(&[i]))
            .collect();
        // extensions may use items that are not members on their own
        let frequent_items: Vec<u32> = (0..self.items as u32)
            .filter(|&i| item_tids[i as usize].len() >= self.tau)
            .collect();
        let first_sets: Vec<u32> = singles
            .iter()
            .copied()
            .filter(|&i| item_tids[i as usize].len() >= self.tau)
            .collect();
        let mut stats = vec![LevelStats {
            level: 1,
            candidates: singles.len(),
            frequent: first_sets.len(),
            feasible_frequent: 0,
        }];
        let first = Level::new(
            first_sets.iter().map(|&i| vec![i]).collect(),
            first_sets
                .iter()
                .map(|&i| item_tids[i as usize].clone())
                .collect(),
        );
        let mut levels = vec![first];
        loop {
            let current = levels.last().expect("at least one level");
            if current.sets.is_empty() {
                break;
            }
            let candidates = self.generate(current, &frequent_items);
            let counted: Vec<(Ids, BitSet)> = candidates
                .into_par_iter()
                .map(|(set, parent, extra)| {
                    let tids = current.tids[parent].intersection(&item_tids[extra as usize]);
                    (set, tids)
                })
                .collect();
            let candidate_count = counted.len();
            let (sets, tids): (Vec<Ids>, Vec<BitSet>) = counted
                .into_iter()
                .filter(|(_, t)| t.len() >= self.tau)
                .unzip();
            stats.push(LevelStats {
                level: levels.len() + 1,
                candidates: candidate_count,
                frequent: sets.len(),
                feasible_frequent: 0,
            });
            levels.push(Level::new(sets, tids));
        }
        while stats.len() > 1 && stats.last().is_some_and(|s| s.candidates == 0) {
            stats.pop();
            levels.pop();
        }
        Found { levels, stats }
    }

    /// Candidates of the next level as `(set, parent index, added item)`,
    /// already pruned.
    fn generate(&self, current: &Level, frequent_items: &[u32]) -> Vec<(Ids, usize, u32)> {
        let raw: Vec<Vec<(Ids, usize, u32)>> = current
            .sets
            .par_iter()
            .enumerate()
            .map(|(parent, set)| {
                let mut out = Vec::new();
                match self.generation {
                    Generation::Unconstrained => {
                        let last = *set.last().expect("non-empty");
                        for &x in frequent_items.iter().filter(|&&x| x > last) {
                            let mut c = set.clone();
                            c.push(x);
                            if (0..set.len()).all(|drop| {
                                let sub: Ids = c
                                    .iter()
                                    .enumerate()
                                    .filter(|&(i, _)| i != drop)
                                    .map(|(_, &v)| v)
                                    .collect();
                                current.index.contains_key(&sub)
                            }) {
                                out.push((c, parent, x));
                            }
                        }
                    }
                    Generation::Connected
                    | Generation::MarkerPrefix
                    | Generation::TournamentPrefix => {
                        let mask = self.label_mask(set);
                        for &x in frequent_items {
                            let [a, b] = self.labels[x as usize];
                            if set.binary_search(&x).is_ok()
                                || !(mask.contains(a as usize) || mask.contains(b as usize))
                            {
                                continue;
                            }
                            let mut c = set.clone();
                            let pos = c.partition_point(|&v| v < x);
                            c.insert(pos, x);
                            out.push((c, parent, x));
                        }
                    }
                }
                out
            })
            .collect();
        match self.generation {
            Generation::Unconstrained => raw.into_iter().flatten().collect(),
            Generation::Connected | Generation::MarkerPrefix | Generation::TournamentPrefix => {
                let mut seen = HashSet::new();
                let unique: Vec<(Ids, usize, u32)> = raw
                    .into_iter()
                    .flatten()
                    .filter(|(c, _, _)| seen.insert(c.clone()))
                    .collect();
                let prefix_only = self.generation != Generation::Connected;
                unique
                    .into_par_iter()
                    .filter(|(c, _, _)| {
                        (!prefix_only || self.feasible(c))
                            && (0..c.len()).all(|drop| {
                                let sub: Ids = c
                                    .iter()
                                    .enumerate()
                                    .filter(|&(i, _)| i != drop)
                                    .map(|(_, &v)| v)
                                    .collect();
                                !self.feasible(&sub) || current.index.contains_key(&sub)
                            })
                    })
                    .collect()
            }
        }
    }
}

impl Found {
    pub fn all_sets(&self) -> impl Iterator<Item = &Ids> {
        self.levels.iter().flat_map(|l| l.sets.iter())
    }

    pub fn support_of<'a>(&'a self) -> impl Iterator<Item = (&'a Ids, usize)> + 'a {
        self.levels
            .iter()
            .flat_map(|l| l.sets.iter().zip(l.tids.iter().map(BitSet::len)))
    }

    /// Sets with no found one-item extension. Exact whenever every set that
    /// has a found strict superset also has a found superset one larger.
    pub fn maximal_by_extension(&self) -> Vec<Ids> {
        let mut out = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            let mut dominated = vec![false; level.sets.len()];
            if let Some(next) = self.levels.get(k + 1) {
                for set in &next.sets {
                    for drop in 0..set.len() {
                        let sub: Ids = set
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != drop)
                            .map(|(_, &v)| v)
                            .collect();
                        if let Some(&i) = level.index.get(&sub) {
                            dominated[i] = true;
                        }
                    }
                }
            }
            out.extend(
                level
                    .sets
                    .iter()
                    .zip(dominated)
                    .filter(|(_, d)| !d)
                    .map(|(s, _)| s.clone()),
            );
        }
        out
    }
}

/// Maximal elements of `sets` under inclusion, by largest-first scanning with
/// per-item posting lists.
pub(crate) fn maximal_by_scan(mut sets: Vec<Ids>, items: usize) -> Vec<Ids> {
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut postings: Vec<Vec<usize>> = vec![Vec::new(); items];
    let mut maximal: Vec<Ids> = Vec::new();
    for set in sets {
        let covered = match set.iter().min_by_key(|&&i| postings[i as usize].len()) {
            Some(&pivot) => postings[pivot as usize]
                .iter()
                .any(|&m| maximal[m].len() > set.len() && is_sorted_subset(&set, &maximal[m])),
            None => !maximal.is_empty(),
        };
        if !covered {
            for &i in &set {
                postings[i as usize].push(maximal.len());
            }
            maximal.push(set);
        }
    }
    maximal
}

/// Evaluates `keep` on every set in parallel, preserving order.
pub(crate) fn filter_sets<F>(sets: Vec<Ids>, keep: F) -> Result<Vec<Ids>>
where
    F: Fn(&Ids) -> Result<bool> + Sync,
{
    let flags = sets.par_iter().map(&keep).collect::<Result<Vec<bool>>>()?;
    Ok(sets
        .into_iter()
        .zip(flags)
        .filter(|(_, k)| *k)
        .map(|(s, _)| s)
        .collect())
}
