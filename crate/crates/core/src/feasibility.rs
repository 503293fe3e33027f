//! Feasibility predicates: a closed algebra of constant-size descriptors that
//! restrict which patterns count.
//!
//! # The connectivity predicate
//!
//! [`Predicate::ConnectedEdges`] applies to itemsets of [`LabelPair`]s. A pair
//! `(a, b)` with `a != b` is an edge; the pair `(v, v)` is a marker for the
//! vertex `v`. An itemset is feasible when
//!
//! * it contains at least one edge, its edges form a connected graph, and
//!   every marker names an endpoint of one of those edges; or
//! * it consists of exactly one marker (a one-vertex graph).
//!
//! Two feasible itemsets have a feasible union exactly when their label sets
//! intersect ([`mergeable`]), and every feasible itemset of size `k >= 2` has
//! a feasible subset of size `k - 1`. The miner relies on both facts to prune
//! infeasible candidates together with infrequent ones.
//!
//! # Descriptor syntax
//!
//! ```text
//! phi  := atom ( ('&' | '∧') atom )*
//! atom := 'always' | 'connected-edges'
//!       | 'preimage(' reduction [ ';' phi ] ')'
//!       | '(' phi ')'
//! ```
//!
//! `reduction` uses the reduction id syntax (`fis2seq`, `g2bdg3@3`,
//! `compose:fis2seq,seq2dag`, ...) and must give the parameter of
//! parameterized steps explicitly. A missing inner predicate means `always`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Label, LabelPair, Pattern};
use crate::reductions::{Reduction, ReductionSpec, Step};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Predicate {
    Always,
    ConnectedEdges,
    /// Feasible iff the pattern has a preimage under the reduction and the
    /// preimage satisfies `inner`.
    Preimage {
        reduction: Reduction,
        inner: Box<Predicate>,
    },
    And(Vec<Predicate>),
}

impl Predicate {
    pub fn preimage(reduction: Reduction, inner: Predicate) -> Self {
        Predicate::Preimage {
            reduction,
            inner: Box::new(inner),
        }
    }

    /// Conjunction with nested conjunctions flattened, duplicates and `always`
    /// dropped.
    pub fn and(parts: Vec<Predicate>) -> Self {
        let mut flat: Vec<Predicate> = Vec::new();
        fn push(flat: &mut Vec<Predicate>, p: Predicate) {
            match p {
                Predicate::And(ps) => ps.into_iter().for_each(|q| push(flat, q)),
                Predicate::Always => {}
                q if flat.contains(&q) => {}
                q => flat.push(q),
            }
        }
        parts.into_iter().for_each(|p| push(&mut flat, p));
        match flat.len() {
            0 => Predicate::Always,
            1 => flat.pop().expect("one element"),
            _ => Predicate::And(flat),
        }
    }

    pub fn eval(&self, p: &Pattern) -> Result<bool> {
        match self {
            Predicate::Always => Ok(true),
            Predicate::ConnectedEdges => match p {
                Pattern::Pairs(s) => Ok(connected_edge_itemset(s.items())),
                other => Err(Error::mismatch("pair itemset", other.kind())),
            },
            Predicate::Preimage { reduction, inner } => match reduction.inverse(p)? {
                Some(q) => inner.eval(&q),
                None => Ok(false),
            },
            Predicate::And(parts) => {
                for part in parts {
                    if !part.eval(p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Whether every feasible pattern of size `k >= 2` has a feasible
    /// sub-pattern of size `k - 1`, which licenses levelwise pruning.
    pub fn split_stable(&self) -> bool {
        match self {
            Predicate::Always | Predicate::ConnectedEdges => true,
            Predicate::Preimage { reduction, inner } => {
                reduction.preimage_closed() && inner.split_stable()
            }
            Predicate::And(parts) => parts.iter().all(Predicate::split_stable),
        }
    }

    /// The last two steps of every chain some conjunct asks for a preimage
    /// under, with the inner predicate's chain in front.
    fn preimage_tails(&self) -> Vec<[Option<Step>; 2]> {
        match self {
            Predicate::Preimage { reduction, inner } => {
                let mut inner_tails = inner.preimage_tails();
                if inner_tails.is_empty() {
                    inner_tails.push([None, None]);
                }
                inner_tails
                    .into_iter()
                    .map(|[a, b]| {
                        let mut tail = vec![a, b];
                        tail.extend(reduction.steps().iter().cloned().map(Some));
                        [tail[tail.len() - 2], tail[tail.len() - 1]]
                    })
                    .collect()
            }
            Predicate::And(parts) => parts.iter().flat_map(Predicate::preimage_tails).collect(),
            _ => Vec::new(),
        }
    }

    /// Whether every feasible pattern is the edge itemset of a whole graph,
    /// which holds when a conjunct asks for a preimage under an edge-itemset
    /// step.
    pub(crate) fn implies_graph_itemset(&self) -> bool {
        self.preimage_tails()
            .iter()
            .any(|[_, last]| matches!(last, Some(Step::GraphToEdges | Step::DigraphToEdges)))
    }

    /// Whether every feasible pattern is the edge itemset of a transitive
    /// tournament, the image of a sequence.
    pub(crate) fn implies_tournament_itemset(&self) -> bool {
        self.preimage_tails()
            .iter()
            .any(|tail| matches!(tail, [Some(Step::SeqToDag), Some(Step::DigraphToEdges)]))
    }

    /// Splits the predicate into a split-stable conjunct usable for pruning
    /// and a residual conjunct that has to be applied after mining.
    pub fn pruning_split(&self) -> (Predicate, Option<Predicate>) {
        let mut prune = Vec::new();
        let mut residual = Vec::new();
        fn walk(p: &Predicate, prune: &mut Vec<Predicate>, residual: &mut Vec<Predicate>) {
            match p {
                Predicate::And(parts) => parts.iter().for_each(|q| walk(q, prune, residual)),
                q if q.split_stable() => prune.push(q.clone()),
                q => residual.push(q.clone()),
            }
        }
        walk(self, &mut prune, &mut residual);
        let residual = match Predicate::and(residual) {
            Predicate::Always => None,
            r => Some(r),
        };
        (Predicate::and(prune), residual)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut parser = Parser {
            chars: text.chars().collect(),
            pos: 0,
        };
        let phi = parser.conjunction()?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(phi)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Always => write!(f, "always"),
            Predicate::ConnectedEdges => write!(f, "connected-edges"),
            Predicate::Preimage { reduction, inner } => match inner.as_ref() {
                Predicate::Always => write!(f, "preimage({})", reduction.id()),
                inner => write!(f, "preimage({};{inner})", reduction.id()),
            },
            Predicate::And(parts) => {
                let parts: Vec<String> = parts
                    .iter()
                    .map(|p| match p {
                        Predicate::And(_) => format!("({p})"),
                        p => p.to_string(),
                    })
                    .collect();
                write!(f, "{}", parts.join("∧"))
            }
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::BadDescriptor(format!("{message} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        let end = self.pos + word.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(word.chars()) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn conjunction(&mut self) -> Result<Predicate> {
        let mut parts = vec![self.atom()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('&') | Some('∧') => {
                    self.pos += 1;
                    if self.peek() == Some('&') {
                        self.pos += 1;
                    }
                    parts.push(self.atom()?);
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Predicate::And(parts)
        })
    }

    fn atom(&mut self) -> Result<Predicate> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            let inner = self.conjunction()?;
            self.skip_ws();
            if self.peek() != Some(')') {
                return Err(self.error("expected `)`"));
            }
            self.pos += 1;
            return Ok(inner);
        }
        if self.eat_keyword("always") {
            return Ok(Predicate::Always);
        }
        if self.eat_keyword("connected-edges") {
            return Ok(Predicate::ConnectedEdges);
        }
        if self.eat_keyword("preimage(") {
            let start = self.pos;
            while self.peek().is_some_and(|c| c != ';' && c != ')') {
                self.pos += 1;
            }
            let id: String = self.chars[start..self.pos].iter().collect();
            let reduction = id.trim().parse::<ReductionSpec>()?.bind_explicit()?;
            let inner = if self.peek() == Some(';') {
                self.pos += 1;
                self.conjunction()?
            } else {
                Predicate::Always
            };
            self.skip_ws();
            if self.peek() != Some(')') {
                return Err(self.error("expected `)` closing preimage"));
            }
            self.pos += 1;
            return Ok(Predicate::preimage(reduction, inner));
        }
        Err(self.error("expected `always`, `connected-edges` or `preimage(...)`"))
    }
}

/// Connectivity of an edge itemset, evaluated by graph traversal (see the
/// module documentation for the role of vertex markers). The empty itemset is
/// infeasible.
pub fn connected_edge_itemset(items: &[LabelPair]) -> bool {
    connected_pairs(items.iter().map(|p| (p.first, p.second)))
}

pub(crate) fn connected_pairs<K, T>(pairs: T) -> bool
where
    K: Copy + Ord,
    T: IntoIterator<Item = (K, K)>,
{
    let mut markers = BTreeSet::new();
    let mut adjacency: BTreeMap<K, Vec<K>> = BTreeMap::new();
    for (a, b) in pairs {
        if a == b {
            markers.insert(a);
        } else {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
    }
    let Some(&start) = adjacency.keys().next() else {
        return markers.len() == 1;
    };
    if markers.iter().any(|m| !adjacency.contains_key(m)) {
        return false;
    }
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adjacency[&v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == adjacency.len()
}

/// Connected pairs whose markers are exactly the smallest few endpoint
/// labels. Every edge itemset that describes a whole graph (markers on all
/// endpoints) belongs to this family, and every member with at least two
/// pairs keeps membership after dropping its largest marker or, without
/// markers, a suitable edge.
pub(crate) fn marker_prefix_pairs<K, T>(pairs: T) -> bool
where
    K: Copy + Ord,
    T: IntoIterator<Item = (K, K)> + Clone,
{
    if !connected_pairs(pairs.clone()) {
        return false;
    }
    let mut markers = BTreeSet::new();
    let mut endpoints = BTreeSet::new();
    for (a, b) in pairs {
        if a == b {
            markers.insert(a);
        } else {
            endpoints.insert(a);
            endpoints.insert(b);
        }
    }
    endpoints.is_empty() || endpoints.iter().take(markers.len()).eq(markers.iter())
}

/// Tournament itemsets built one vertex at a time in label order: with
/// vertices `v1 < … < vm`, the markers of `v1 … v(m-1)` and one pair for every
/// two of them, then pairs joining `vm` to `v1 … vj`, then the marker of `vm`
/// once `j = m - 1`. Every transitive tournament with all its markers is a
/// member, and dropping the last added pair of a member leaves a member.
pub(crate) fn tournament_prefix_pairs<K, T>(pairs: T) -> bool
where
    K: Copy + Ord,
    T: IntoIterator<Item = (K, K)>,
{
    let mut markers = BTreeSet::new();
    let mut joined: BTreeSet<(K, K)> = BTreeSet::new();
    for (a, b) in pairs {
        if a == b {
            markers.insert(a);
        } else if !joined.insert((a.min(b), a.max(b))) {
            return false;
        }
    }
    let vertices: Vec<K> = markers
        .iter()
        .copied()
        .chain(joined.iter().flat_map(|&(a, b)| [a, b]))
        .collect::<BTreeSet<K>>()
        .into_iter()
        .collect();
    let Some((&last, earlier)) = vertices.split_last() else {
        return false;
    };
    let m = vertices.len();
    let last_marked = markers.contains(&last);
    if m == 1 {
        return last_marked;
    }
    let to_last: Vec<K> = joined
        .iter()
        .filter(|&&(_, b)| b == last)
        .map(|&(a, _)| a)
        .collect();
    let j = to_last.len();
    j >= 1
        && joined.len() - j == (m - 1) * (m - 2) / 2
        && to_last[..] == earlier[..j]
        && earlier.iter().all(|v| markers.contains(v))
        && (!last_marked || j == m - 1)
}

/// An edge itemset together with its label set, as stored alongside
/// candidates during mining.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeItemset {
    items: Vec<LabelPair>,
    labels: BTreeSet<Label>,
}

impl EdgeItemset {
    pub fn new<T: IntoIterator<Item = LabelPair>>(items: T) -> Self {
        let mut items: Vec<LabelPair> = items.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        let labels = items.iter().flat_map(|p| [p.first, p.second]).collect();
        EdgeItemset { items, labels }
    }

    pub fn items(&self) -> &[LabelPair] {
        &self.items
    }

    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.labels
    }

    pub fn is_feasible(&self) -> bool {
        connected_edge_itemset(&self.items)
    }

    pub fn union(&self, other: &EdgeItemset) -> EdgeItemset {
        EdgeItemset::new(self.items.iter().chain(&other.items).copied())
    }
}

/// For two feasible edge itemsets, whether their union is feasible: true
/// exactly when the two label sets intersect.
pub fn mergeable(a: &EdgeItemset, b: &EdgeItemset) -> bool {
    !a.labels.is_disjoint(&b.labels)
}
