//! Per-size pattern counts and maximal-pattern counts over a threshold sweep.
//!
//! Non-itemset databases are first reduced to itemsets (graphs to their edge
//! itemsets). "Unconstrained" then means plain frequent itemset mining of the
//! reduced database, and "constrained" means mining with the feasibility
//! predicate the reduction induces, so the constrained maximal count is the
//! number of maximal patterns in the original domain.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::feasibility::Predicate;
use crate::miner::{mine, mine_max_ffis, LevelStats};
use crate::model::{Database, SupportThreshold};
use crate::reductions::Reduction;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SizeRow {
    pub size: usize,
    pub frequent: usize,
    pub feasible: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SweepRow {
    pub tau: usize,
    pub unconstrained: usize,
    pub constrained: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StatsReport {
    pub tau: usize,
    pub sizes: Vec<SizeRow>,
    pub sweep: Vec<SweepRow>,
}

impl StatsReport {
    /// Two tab-separated tables, each introduced by a `#` comment line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# itemset counts by size at tau={}", self.tau).unwrap();
        writeln!(out, "size\tfrequent\tfeasible").unwrap();
        for r in &self.sizes {
            writeln!(out, "{}\t{}\t{}", r.size, r.frequent, r.feasible).unwrap();
        }
        writeln!(out, "# maximal pattern counts by tau").unwrap();
        writeln!(out, "tau\tunconstrained\tconstrained").unwrap();
        for r in &self.sweep {
            writeln!(out, "{}\t{}\t{}", r.tau, r.unconstrained, r.constrained).unwrap();
        }
        out
    }
}

/// The itemset database and predicate the statistics are taken on.
fn itemset_view(db: &Database, phi: &Predicate) -> Result<(Database, Predicate)> {
    if db.domain().is_itemset() {
        return Ok((db.clone(), phi.clone()));
    }
    let r = Reduction::identity().complete_to_itemsets(db.domain())?;
    let kept = db
        .transactions()
        .iter()
        .filter(|t| r.forward(t).is_ok() || !t.is_empty())
        .cloned()
        .collect();
    let source = Database::new(db.domain(), kept)?;
    Ok((r.reduce_database(&source)?, r.induced_feasibility(phi)))
}

fn level_rows(always: &[LevelStats], constrained: &[LevelStats]) -> Vec<SizeRow> {
    let levels = always.len().max(constrained.len());
    (0..levels)
        .map(|i| SizeRow {
            size: i + 1,
            frequent: always.get(i).map_or(0, |s| s.frequent),
            feasible: constrained.get(i).map_or(0, |s| s.feasible_frequent),
        })
        .filter(|r| r.frequent > 0 || r.feasible > 0)
        .collect()
}

pub fn size_table(db: &Database, tau: SupportThreshold, phi: &Predicate) -> Result<Vec<SizeRow>> {
    let (items, target_phi) = itemset_view(db, phi)?;
    let always = mine_max_ffis(&items, tau, &Predicate::Always)?;
    let constrained = mine_max_ffis(&items, tau, &target_phi)?;
    Ok(level_rows(&always.stats, &constrained.stats))
}

pub fn tau_sweep(
    db: &Database,
    taus: RangeInclusive<usize>,
    phi: &Predicate,
) -> Result<Vec<SweepRow>> {
    let (items, _) = itemset_view(db, phi)?;
    taus.map(|t| {
        let tau = SupportThreshold::new(t)?;
        Ok(SweepRow {
            tau: t,
            unconstrained: mine_max_ffis(&items, tau, &Predicate::Always)?.len(),
            constrained: mine(db, tau, phi)?.len(),
        })
    })
    .collect()
}

pub fn stats(
    db: &Database,
    tau: SupportThreshold,
    taus: RangeInclusive<usize>,
    phi: &Predicate,
) -> Result<StatsReport> {
    if taus.is_empty() || *taus.start() == 0 {
        return Err(Error::Usage(format!(
            "threshold range {}..{} is empty or starts at 0",
            taus.start(),
            taus.end()
        )));
    }
    Ok(StatsReport {
        tau: tau.get(),
        sizes: size_table(db, tau, phi)?,
        sweep: tau_sweep(db, taus, phi)?,
    })
}
