//! Miner-against-oracle checks and reduction property checks.

use std::collections::BTreeMap;
use std::fmt;

use crate::domains::GraphClass;
use crate::error::Result;
use crate::feasibility::Predicate;
use crate::miner::{mine, mine_via_reduction};
use crate::model::{Database, Domain, Pattern, SupportThreshold};
use crate::oracle::{oracle_max, subpatterns};
use crate::reductions::{Reduction, ReductionSpec};

use super::random::{self, Rng8, Shape};
use rand::Rng;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Pass counts per check name, in name order.
    pub fn summary(&self) -> BTreeMap<&str, (usize, usize)> {
        let mut out: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for c in &self.checks {
            let e = out.entry(c.name.as_str()).or_default();
            e.0 += usize::from(c.passed);
            e.1 += 1;
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, (ok, total)) in self.summary() {
            let verdict = if ok == total { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict}\t{name}\t{ok}/{total}")?;
        }
        for c in self.failures().take(20) {
            writeln!(f, "failed\t{}\t{}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn show(ps: &[Pattern]) -> String {
    ps.iter()
        .map(Pattern::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// The miner (through `reduction`, or the default chain for the identity)
/// against the exhaustive oracle.
pub fn check_against_oracle(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    reduction: &Reduction,
) -> Result<Check> {
    let mined = if reduction.is_identity() {
        mine(db, tau, phi)?
    } else {
        mine_via_reduction(reduction, db, tau, phi)?
    };
    let expected = oracle_max(db, tau, phi)?;
    let passed = mined.maximal == expected;
    let detail = if passed {
        format!("tau={tau} |Max|={}", expected.len())
    } else {
        format!(
            "tau={tau} reduction={reduction} miner=[{}] oracle=[{}]",
            show(&mined.maximal),
            show(&expected)
        )
    };
    Ok(Check::new("max-equals-oracle", passed, detail))
}

/// The defining properties of a maximality-preserving reduction on one
/// instance: round trip, order preservation and reflection on the given
/// pattern pairs, target class membership, and preservation of the maximal
/// patterns and of their number.
pub fn check_reduction_properties(
    r: &Reduction,
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    pairs: &[(Pattern, Pattern)],
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let representable: Vec<Pattern> = db
        .transactions()
        .iter()
        .flat_map(subpatterns)
        .filter(|p| r.forward(p).is_ok())
        .collect();

    let bad_round_trip = representable.iter().find(|p| {
        r.forward(p)
            .and_then(|q| r.inverse(&q))
            .ok()
            .flatten()
            .as_ref()
            != Some(*p)
    });
    checks.push(Check::new(
        "round-trip",
        bad_round_trip.is_none(),
        bad_round_trip.map_or(format!("{} patterns", representable.len()), |p| {
            format!("{r} on {p}")
        }),
    ));

    let mut order_failure = None;
    for (p, q) in pairs {
        let (Ok(fp), Ok(fq)) = (r.forward(p), r.forward(q)) else {
            continue;
        };
        for (a, b, fa, fb) in [(p, q, &fp, &fq), (q, p, &fq, &fp)] {
            if a.leq(b)? != fa.leq(fb)? {
                order_failure = Some(format!("{r}: {a} vs {b}"));
            }
        }
    }
    checks.push(Check::new(
        "order-preserved",
        order_failure.is_none(),
        order_failure.unwrap_or_else(|| format!("{} pairs", pairs.len())),
    ));

    let kept: Vec<Pattern> = db
        .transactions()
        .iter()
        .filter(|t| r.forward(t).is_ok())
        .cloned()
        .collect();
    let source = Database::new(db.domain(), kept)?;
    let class_check = match r.reduce_database(&source) {
        Ok(reduced) => {
            let degree_ok = !r
                .steps()
                .iter()
                .any(|s| s.target_domain() == Domain::Graph(GraphClass::BoundedDegree(3)))
                || reduced
                    .transactions()
                    .iter()
                    .all(|t| t.as_graph().is_none_or(|g| g.max_degree() <= 3));
            Check::new("target-class", degree_ok, format!("{}", reduced.domain()))
        }
        Err(e) => Check::new("target-class", false, e.to_string()),
    };
    checks.push(class_check);

    let oracle = oracle_max(db, tau, phi)?;
    let reduced = r.reduce_database(&source)?;
    let target_phi = r.induced_feasibility(phi);
    let target = mine(&reduced, tau, &target_phi)?;
    let expected_count = oracle.iter().filter(|p| r.forward(p).is_ok()).count();
    checks.push(Check::new(
        "count-preserved",
        target.len() == expected_count,
        format!("{r}: target {} source {}", target.len(), expected_count),
    ));
    let lifted = mine_via_reduction(r, db, tau, phi)?;
    checks.push(Check::new(
        "lifted-equals-oracle",
        lifted.maximal == oracle,
        if lifted.maximal == oracle {
            format!("{r}: |Max|={}", oracle.len())
        } else {
            format!(
                "{r}: lifted=[{}] oracle=[{}]",
                show(&lifted.maximal),
                show(&oracle)
            )
        },
    ));
    Ok(checks)
}

pub fn verify_instance(
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    reduction: &Reduction,
    rng: &mut Rng8,
) -> Result<VerifyReport> {
    let mut checks = vec![check_against_oracle(db, tau, phi, reduction)?];
    if !reduction.is_identity() {
        let pairs: Vec<(Pattern, Pattern)> = (0..20)
            .filter_map(|_| random::pattern_pair(rng, db))
            .collect();
        checks.extend(check_reduction_properties(reduction, db, tau, phi, &pairs)?);
    }
    Ok(VerifyReport { checks })
}

/// The instance families cycled through by [`verify_random`].
fn family(i: usize) -> (Domain, &'static str, Shape) {
    let small = Shape {
        labels: 8,
        transactions: 8,
        max_size: 6,
        extra_edges: 2,
    };
    let graphs = Shape {
        labels: 6,
        transactions: 6,
        max_size: 5,
        extra_edges: 2,
    };
    let gadget = Shape {
        labels: 3,
        transactions: 5,
        max_size: 3,
        extra_edges: 1,
    };
    let seqs = Shape {
        labels: 6,
        transactions: 6,
        max_size: 4,
        extra_edges: 0,
    };
    match i % 9 {
        0 => (Domain::Itemset, "identity", small),
        1 => (Domain::Itemset, "fis2tree", small),
        2 => (Domain::Itemset, "compose:fis2seq,seq2dag", seqs),
        3 => (Domain::PairItemset, "identity", small),
        4 => (Domain::Sequence, "seq2dag", seqs),
        5 => (Domain::Graph(GraphClass::General), "g2fis", graphs),
        6 => (Domain::Graph(GraphClass::General), "g2bdg3", gadget),
        7 => (Domain::Graph(GraphClass::Tree), "identity", graphs),
        _ => (Domain::Graph(GraphClass::Directed), "dirg2fis", graphs),
    }
}

/// `count` random small instances over every domain and reduction.
pub fn verify_random(count: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = random::rng(seed);
    let mut report = VerifyReport::default();
    for i in 0..count {
        let (domain, reduction, shape) = family(i);
        let db = random::database(&mut rng, domain, &shape);
        let tau = SupportThreshold::new(rng.gen_range(1..=db.len().max(1)))?;
        let phi = if domain == Domain::PairItemset && rng.gen_bool(0.5) {
            Predicate::ConnectedEdges
        } else {
            Predicate::Always
        };
        let r = reduction.parse::<ReductionSpec>()?.bind(&db)?;
        report
            .checks
            .extend(verify_instance(&db, tau, &phi, &r, &mut rng)?.checks);
    }
    Ok(report)
}
