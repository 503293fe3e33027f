//! Labels, patterns, databases, and the support/frequency/maximality notions
//! shared by every pattern domain.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rayon::prelude::*;

use crate::domains::{
    graph_leq, itemset_leq, sequence_leq, GraphClass, Itemset, LabelledGraph, Sequence,
};
use crate::error::{Error, Result};
use crate::feasibility::Predicate;

/// A label drawn from the universe `{1, 2, ...}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(u32);

impl Label {
    pub fn new(id: u32) -> Result<Self> {
        if id == 0 {
            Err(Error::InvalidLabel(0))
        } else {
            Ok(Label(id))
        }
    }

    pub const fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for Label {
    type Error = Error;

    fn try_from(id: u32) -> Result<Self> {
        Label::new(id)
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id: u64 = s
            .parse()
            .map_err(|_| Error::InvalidPattern(format!("`{s}` is not a label")))?;
        if id == 0 || id > u32::MAX as u64 {
            return Err(Error::InvalidLabel(id));
        }
        Ok(Label(id as u32))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered pair of labels, used as a composite item when a graph is read
/// off as the itemset of its edges.
///
/// A pair whose two components coincide is a *vertex marker*: it stands for a
/// vertex rather than an edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelPair {
    pub first: Label,
    pub second: Label,
}

impl LabelPair {
    pub const fn new(first: Label, second: Label) -> Self {
        LabelPair { first, second }
    }

    /// The pair for an undirected edge, smaller label first.
    pub fn undirected(a: Label, b: Label) -> Self {
        if a <= b {
            LabelPair::new(a, b)
        } else {
            LabelPair::new(b, a)
        }
    }

    pub const fn marker(v: Label) -> Self {
        LabelPair::new(v, v)
    }

    pub fn is_marker(self) -> bool {
        self.first == self.second
    }
}

impl fmt::Display for LabelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.first, self.second)
    }
}

impl fmt::Debug for LabelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

impl FromStr for LabelPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidPattern(format!("`{s}` is not a label pair `a,b`")))?;
        Ok(LabelPair::new(a.trim().parse()?, b.trim().parse()?))
    }
}

/// Element type of an itemset domain.
pub trait Item: Copy + Ord + Hash + Send + Sync + fmt::Debug + fmt::Display + 'static {
    fn into_pattern(set: Itemset<Self>) -> Pattern;

    /// The itemset inside `p`, if `p` is an itemset over this item type.
    fn view(p: &Pattern) -> Option<&Itemset<Self>>;

    /// The labels this item mentions (both components for a pair).
    fn labels(self) -> [Label; 2];
}

impl Item for Label {
    fn into_pattern(set: Itemset<Self>) -> Pattern {
        Pattern::Items(set)
    }

    fn view(p: &Pattern) -> Option<&Itemset<Self>> {
        match p {
            Pattern::Items(s) => Some(s),
            _ => None,
        }
    }

    fn labels(self) -> [Label; 2] {
        [self, self]
    }
}

impl Item for LabelPair {
    fn into_pattern(set: Itemset<Self>) -> Pattern {
        Pattern::Pairs(set)
    }

    fn view(p: &Pattern) -> Option<&Itemset<Self>> {
        match p {
            Pattern::Pairs(s) => Some(s),
            _ => None,
        }
    }

    fn labels(self) -> [Label; 2] {
        [self.first, self.second]
    }
}

/// A pattern (equivalently, a transaction) of one of the supported domains.
///
/// The derived ordering is the canonical pattern order: lexicographic on the
/// sorted item list, on the event list, or on the sorted edge list followed by
/// the vertex list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pattern {
    Items(Itemset<Label>),
    Pairs(Itemset<LabelPair>),
    Sequence(Sequence),
    Graph(LabelledGraph),
}

impl Pattern {
    pub fn items<I: IntoIterator<Item = u32>>(ids: I) -> Result<Self> {
        let labels = ids
            .into_iter()
            .map(Label::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Pattern::Items(Itemset::new(labels)))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Pattern::Items(_) => "itemset",
            Pattern::Pairs(_) => "pair itemset",
            Pattern::Sequence(_) => "sequence",
            Pattern::Graph(g) if g.is_directed() => "directed graph",
            Pattern::Graph(_) => "undirected graph",
        }
    }

    /// Number of items or events; vertices plus edges for a graph. Strictly
    /// increases along strict `⊑`.
    pub fn size(&self) -> usize {
        match self {
            Pattern::Items(s) => s.len(),
            Pattern::Pairs(s) => s.len(),
            Pattern::Sequence(s) => s.len(),
            Pattern::Graph(g) => g.vertex_count() + g.edge_count(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        match self {
            Pattern::Items(s) => s.items().iter().copied().collect(),
            Pattern::Pairs(s) => s.items().iter().flat_map(|p| p.labels()).collect(),
            Pattern::Sequence(s) => s.events().iter().copied().collect(),
            Pattern::Graph(g) => g.vertices().iter().copied().collect(),
        }
    }

    /// The domain order `self ⊑ other`.
    pub fn leq(&self, other: &Pattern) -> Result<bool> {
        match (self, other) {
            (Pattern::Items(a), Pattern::Items(b)) => Ok(itemset_leq(a, b)),
            (Pattern::Pairs(a), Pattern::Pairs(b)) => Ok(itemset_leq(a, b)),
            (Pattern::Sequence(a), Pattern::Sequence(b)) => Ok(sequence_leq(a, b)),
            (Pattern::Graph(a), Pattern::Graph(b)) => graph_leq(a, b),
            _ => Err(Error::mismatch(self.kind(), other.kind())),
        }
    }

    /// Strict order `self ⊏ other`.
    pub fn lt(&self, other: &Pattern) -> Result<bool> {
        Ok(self != other && self.leq(other)?)
    }

    pub fn as_graph(&self) -> Option<&LabelledGraph> {
        match self {
            Pattern::Graph(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        }
        match self {
            Pattern::Items(s) => write!(f, "{{{}}}", join(s.items(), ",")),
            Pattern::Pairs(s) => {
                let parts: Vec<String> = s.items().iter().map(|p| format!("({p})")).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Pattern::Sequence(s) => write!(f, "<{}>", join(s.events(), ",")),
            Pattern::Graph(g) => write!(f, "{g}"),
        }
    }
}

impl From<Itemset<Label>> for Pattern {
    fn from(s: Itemset<Label>) -> Self {
        Pattern::Items(s)
    }
}

impl From<Itemset<LabelPair>> for Pattern {
    fn from(s: Itemset<LabelPair>) -> Self {
        Pattern::Pairs(s)
    }
}

impl From<Sequence> for Pattern {
    fn from(s: Sequence) -> Self {
        Pattern::Sequence(s)
    }
}

impl From<LabelledGraph> for Pattern {
    fn from(g: LabelledGraph) -> Self {
        Pattern::Graph(g)
    }
}

/// The domain a database (and its patterns) belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Domain {
    Itemset,
    /// Itemsets whose items are label pairs.
    PairItemset,
    Sequence,
    Graph(GraphClass),
}

impl Domain {
    /// Whether `p` has the right shape for this domain (variant and
    /// directedness), without checking class membership.
    pub fn admits_kind(&self, p: &Pattern) -> bool {
        match (self, p) {
            (Domain::Itemset, Pattern::Items(_))
            | (Domain::PairItemset, Pattern::Pairs(_))
            | (Domain::Sequence, Pattern::Sequence(_)) => true,
            (Domain::Graph(c), Pattern::Graph(g)) => c.is_directed() == g.is_directed(),
            _ => false,
        }
    }

    pub fn check_kind(&self, p: &Pattern) -> Result<()> {
        if self.admits_kind(p) {
            Ok(())
        } else {
            Err(Error::mismatch(self, p.kind()))
        }
    }

    /// Full validation of a transaction: shape plus, for graphs, connectivity
    /// and class membership.
    pub fn validate(&self, p: &Pattern) -> std::result::Result<(), String> {
        if !self.admits_kind(p) {
            return Err(format!(
                "expected a {self} transaction, found a {}",
                p.kind()
            ));
        }
        if let (Domain::Graph(c), Pattern::Graph(g)) = (self, p) {
            if !c.validate(g) {
                return Err(format!("graph {g} is not a member of class {c}"));
            }
        }
        Ok(())
    }

    /// `self`'s transactions are all valid transactions of `other`.
    pub fn is_subdomain_of(&self, other: &Domain) -> bool {
        match (self, other) {
            (Domain::Graph(a), Domain::Graph(b)) => a.is_subclass_of(*b),
            _ => self == other,
        }
    }

    /// The empty pattern, where the domain has one.
    pub fn empty_pattern(&self) -> Option<Pattern> {
        match self {
            Domain::Itemset => Some(Pattern::Items(Itemset::empty())),
            Domain::PairItemset => Some(Pattern::Pairs(Itemset::empty())),
            Domain::Sequence => Some(Pattern::Sequence(Sequence::empty())),
            Domain::Graph(_) => None,
        }
    }

    pub fn is_itemset(&self) -> bool {
        matches!(self, Domain::Itemset | Domain::PairItemset)
    }
}

/// `itemset`, `pairs`, `sequence`, `graph` (general graphs) or
/// `graph(<class>)`; the inverse of `Display`.
impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "itemset" | "itemsets" | "fis" => Ok(Domain::Itemset),
            "pairs" | "pair" => Ok(Domain::PairItemset),
            "sequence" | "sequences" | "seq" => Ok(Domain::Sequence),
            "graph" | "graphs" => Ok(Domain::Graph(GraphClass::General)),
            other => other
                .strip_prefix("graph(")
                .and_then(|rest| rest.strip_suffix(')'))
                .map(|c| c.parse().map(Domain::Graph))
                .unwrap_or_else(|| {
                    Err(Error::Usage(format!(
                        "unknown domain `{s}` (itemset, pairs, sequence, graph, graph(<class>))"
                    )))
                }),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Itemset => write!(f, "itemset"),
            Domain::PairItemset => write!(f, "pairs"),
            Domain::Sequence => write!(f, "sequence"),
            Domain::Graph(c) => write!(f, "graph({c})"),
        }
    }
}

/// Integer support threshold `τ ≥ 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SupportThreshold(usize);

impl SupportThreshold {
    pub fn new(tau: usize) -> Result<Self> {
        if tau == 0 {
            Err(Error::InvalidThreshold(tau))
        } else {
            Ok(SupportThreshold(tau))
        }
    }

    /// `ceil(fraction * transactions)`, clamped to at least 1.
    pub fn from_fraction(fraction: f64, transactions: usize) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::Usage(format!(
                "relative threshold {fraction} is not in (0, 1]"
            )));
        }
        let tau = (fraction * transactions as f64).ceil() as usize;
        Ok(SupportThreshold(tau.max(1)))
    }

    pub const fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for SupportThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A multiset of transactions of one domain. Order is preserved and
/// duplicates count separately.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Database {
    domain: Domain,
    transactions: Vec<Pattern>,
    universe: BTreeSet<Label>,
}

impl Database {
    pub fn new(domain: Domain, transactions: Vec<Pattern>) -> Result<Self> {
        let mut universe = BTreeSet::new();
        for (index, t) in transactions.iter().enumerate() {
            domain
                .validate(t)
                .map_err(|reason| Error::InvalidTransaction { index, reason })?;
            universe.extend(t.labels());
        }
        Ok(Database {
            domain,
            transactions,
            universe,
        })
    }

    /// Convenience constructor for plain itemset databases.
    pub fn itemsets<T, I>(rows: T) -> Result<Self>
    where
        T: IntoIterator<Item = I>,
        I: IntoIterator<Item = u32>,
    {
        let transactions = rows
            .into_iter()
            .map(Pattern::items)
            .collect::<Result<Vec<_>>>()?;
        Database::new(Domain::Itemset, transactions)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn transactions(&self) -> &[Pattern] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn universe(&self) -> &BTreeSet<Label> {
        &self.universe
    }

    /// Largest label in use; labels are read as drawn from `{1..max_label}`.
    pub fn max_label(&self) -> u32 {
        self.universe.iter().next_back().map_or(0, |l| l.get())
    }

    pub fn check_pattern(&self, p: &Pattern) -> Result<()> {
        self.domain.check_kind(p)
    }

    /// `|{t ∈ db : p ⊑ t}|`, counting duplicates.
    pub fn support(&self, p: &Pattern) -> Result<usize> {
        self.check_pattern(p)?;
        let mut count = 0;
        for t in &self.transactions {
            if p.leq(t)? {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn is_frequent(&self, p: &Pattern, tau: SupportThreshold) -> Result<bool> {
        Ok(self.support(p)? >= tau.get())
    }
}

/// Whether `p` is a maximal feasible frequent pattern, judged against the
/// caller-supplied candidate supersets. The verdict is exhaustive only if
/// `candidates` covers every feasible frequent pattern above `p`; the oracle
/// provides such an enumeration.
pub fn is_maximal_feasible<'a, C>(
    p: &Pattern,
    db: &Database,
    tau: SupportThreshold,
    phi: &Predicate,
    candidates: C,
) -> Result<bool>
where
    C: IntoIterator<Item = &'a Pattern>,
{
    if !phi.eval(p)? || !db.is_frequent(p, tau)? {
        return Ok(false);
    }
    let above: Vec<&Pattern> = candidates
        .into_iter()
        .filter(|q| q.size() > p.size())
        .collect();
    let dominated = above
        .par_iter()
        .map(|q| -> Result<bool> { Ok(p.lt(q)? && phi.eval(q)? && db.is_frequent(q, tau)?) })
        .collect::<Result<Vec<bool>>>()?;
    Ok(!dominated.into_iter().any(|d| d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db() -> Database {
        Database::itemsets([vec![1, 2], vec![1, 2], vec![2, 3]]).unwrap()
    }

    fn items(ids: &[u32]) -> Pattern {
        Pattern::items(ids.iter().copied()).unwrap()
    }

    #[test]
    fn domain_names_round_trip() {
        for d in [
            Domain::Itemset,
            Domain::PairItemset,
            Domain::Sequence,
            Domain::Graph(GraphClass::Tree),
            Domain::Graph(GraphClass::BoundedDegree(3)),
            Domain::Graph(GraphClass::Dag),
            Domain::Graph(GraphClass::Directed),
        ] {
            assert_eq!(d.to_string().parse::<Domain>().unwrap(), d);
        }
        assert_eq!(
            "graph".parse::<Domain>().unwrap(),
            Domain::Graph(GraphClass::General)
        );
        assert!("trees".parse::<Domain>().is_err());
    }

    #[test]
    fn label_zero_is_rejected() {
        assert!(Label::new(0).is_err());
        assert!("0".parse::<Label>().is_err());
        assert_eq!("17".parse::<Label>().unwrap().get(), 17);
    }

    #[test]
    fn support_counts_subset_transactions() {
        assert_eq!(db().support(&items(&[1, 2])).unwrap(), 2);
        assert_eq!(db().support(&items(&[3])).unwrap(), 1);
    }

    #[test]
    fn empty_itemset_is_in_every_transaction() {
        let db = Database::itemsets([vec![1], vec![2], vec![], vec![4, 5], vec![1]]).unwrap();
        assert_eq!(db.support(&items(&[])).unwrap(), 5);
    }

    #[test]
    fn subsequence_order_matters_for_support() {
        let seq = |xs: &[u32]| {
            Pattern::Sequence(Sequence::new(xs.iter().map(|&x| Label::new(x).unwrap())).unwrap())
        };
        let db = Database::new(Domain::Sequence, vec![seq(&[1, 2, 3])]).unwrap();
        assert_eq!(db.support(&seq(&[2, 1])).unwrap(), 0);
        assert_eq!(db.support(&seq(&[1, 3])).unwrap(), 1);
    }

    #[test]
    fn support_rejects_other_domains() {
        let p = Pattern::Sequence(Sequence::empty());
        assert!(matches!(
            db().support(&p),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn frequency_threshold() {
        let tau2 = SupportThreshold::new(2).unwrap();
        assert!(db().is_frequent(&items(&[1, 2]), tau2).unwrap());
        assert!(!db().is_frequent(&items(&[3]), tau2).unwrap());
        let tau1 = SupportThreshold::new(1).unwrap();
        assert!(db().is_frequent(&items(&[2, 3]), tau1).unwrap());
        assert!(SupportThreshold::new(0).is_err());
    }

    #[test]
    fn threshold_above_database_size_is_allowed() {
        let tau = SupportThreshold::new(10).unwrap();
        assert!(!db().is_frequent(&items(&[]), tau).unwrap());
    }

    #[test]
    fn relative_threshold_rounds_up() {
        assert_eq!(SupportThreshold::from_fraction(0.5, 5).unwrap().get(), 3);
        assert_eq!(SupportThreshold::from_fraction(0.01, 5).unwrap().get(), 1);
        assert!(SupportThreshold::from_fraction(0.0, 5).is_err());
    }

    #[test]
    fn maximality_against_all_subsets() {
        let universe = [1, 2, 3];
        let all: Vec<Pattern> = (0u32..8)
            .map(|mask| {
                items(
                    &universe
                        .iter()
                        .copied()
                        .filter(|&i| mask & (1 << (i - 1)) != 0)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let tau2 = SupportThreshold::new(2).unwrap();
        let always = Predicate::Always;
        assert!(is_maximal_feasible(&items(&[1, 2]), &db(), tau2, &always, &all).unwrap());
        assert!(!is_maximal_feasible(&items(&[2]), &db(), tau2, &always, &all).unwrap());
        let tau3 = SupportThreshold::new(3).unwrap();
        assert!(!is_maximal_feasible(&items(&[1, 2]), &db(), tau3, &always, &all).unwrap());
    }

    #[test]
    fn database_universe_is_union_of_labels() {
        let u: Vec<u32> = db().universe().iter().map(|l| l.get()).collect();
        assert_eq!(u, vec![1, 2, 3]);
        assert_eq!(db().max_label(), 3);
    }
}
