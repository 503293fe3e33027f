//! Maximality-preserving reductions between pattern domains.
//!
//! A [`Reduction`] is a chain of [`Step`]s. Each step maps transactions and
//! patterns forward injectively, inverts on its image, and induces a target
//! feasibility predicate from a source predicate. Chains compose all three.
//!
//! | id | source | target |
//! |----|--------|--------|
//! | `fis2tree@r` | itemsets | trees (stars rooted at the fresh label `r`) |
//! | `fis2seq` | itemsets | sequences (ascending order) |
//! | `g2bdg3@n` | undirected graphs on labels `1..=n` | degree-3 graphs on labels `1..=n²` |
//! | `g2fis` | undirected graphs | itemsets of label pairs |
//! | `dirg2fis` | directed graphs | itemsets of ordered label pairs |
//! | `seq2dag` | non-empty sequences | transitive tournaments |
//!
//! The edge-itemset steps also emit one marker pair `(v, v)` per vertex, so
//! the itemset determines the vertex set as well as the edge set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::domains::{GraphClass, Itemset, LabelledGraph, Sequence};
use crate::error::{Error, Result};
use crate::feasibility::{connected_pairs, Predicate};
use crate::model::{Database, Domain, Label, LabelPair, Pattern};

/// The unparameterized kind of a reduction step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StepKind {
    FisToTree,
    FisToSeq,
    GraphToBdg3,
    GraphToEdges,
    DigraphToEdges,
    SeqToDag,
}

impl StepKind {
    pub const ALL: [StepKind; 6] = [
        StepKind::FisToTree,
        StepKind::FisToSeq,
        StepKind::GraphToBdg3,
        StepKind::GraphToEdges,
        StepKind::DigraphToEdges,
        StepKind::SeqToDag,
    ];

    pub fn id(self) -> &'static str {
        match self {
            StepKind::FisToTree => "fis2tree",
            StepKind::FisToSeq => "fis2seq",
            StepKind::GraphToBdg3 => "g2bdg3",
            StepKind::GraphToEdges => "g2fis",
            StepKind::DigraphToEdges => "dirg2fis",
            StepKind::SeqToDag => "seq2dag",
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(self, StepKind::FisToTree | StepKind::GraphToBdg3)
    }

    /// Binds the parameter; `param` must be given for parameterized kinds.
    pub fn with_param(self, param: Option<u32>) -> Result<Step> {
        let needs = |p: Option<u32>| {
            p.filter(|&p| p >= 1).ok_or_else(|| {
                Error::UnknownReduction(format!(
                    "{} needs a positive parameter, as in `{}@3`",
                    self.id(),
                    self.id()
                ))
            })
        };
        let step = match self {
            StepKind::FisToTree => Step::FisToTree {
                root: Label::new(needs(param)?)?,
            },
            StepKind::GraphToBdg3 => {
                let n = needs(param)?;
                if n.checked_mul(n).is_none() {
                    return Err(Error::UnknownReduction(format!(
                        "g2bdg3@{n}: n² overflows the label space"
                    )));
                }
                Step::GraphToBdg3 { n }
            }
            kind => {
                if param.is_some() {
                    return Err(Error::UnknownReduction(format!(
                        "{} takes no parameter",
                        kind.id()
                    )));
                }
                match kind {
                    StepKind::FisToSeq => Step::FisToSeq,
                    StepKind::GraphToEdges => Step::GraphToEdges,
                    StepKind::DigraphToEdges => Step::DigraphToEdges,
                    _ => Step::SeqToDag,
                }
            }
        };
        Ok(step)
    }
}

impl FromStr for StepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StepKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::UnknownReduction(s.to_string()))
    }
}

/// One bound reduction step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Step {
    /// Itemset `{i₁..i_k}` to the star with centre `root` and leaves `i_j`.
    FisToTree {
        root: Label,
    },
    /// Itemset to the ascending sequence of its items.
    FisToSeq,
    /// Vertex `v` becomes the path `(v,1)–…–(v,n)`, edge `u–v` becomes
    /// `(u,ℓ(v))–(v,ℓ(u))`. The pair `(a, i)` is encoded as `(a−1)·n + i`.
    GraphToBdg3 {
        n: u32,
    },
    GraphToEdges,
    DigraphToEdges,
    /// Sequence `⟨s₁..s_r⟩` to the tournament with edges `s_i → s_j`, `i < j`.
    SeqToDag,
}

impl Step {
    pub fn kind(&self) -> StepKind {
        match self {
            Step::FisToTree { .. } => StepKind::FisToTree,
            Step::FisToSeq => StepKind::FisToSeq,
            Step::GraphToBdg3 { .. } => StepKind::GraphToBdg3,
            Step::GraphToEdges => StepKind::GraphToEdges,
            Step::DigraphToEdges => StepKind::DigraphToEdges,
            Step::SeqToDag => StepKind::SeqToDag,
        }
    }

    pub fn id(&self) -> String {
        match self {
            Step::FisToTree { root } => format!("fis2tree@{root}"),
            Step::GraphToBdg3 { n } => format!("g2bdg3@{n}"),
            other => other.kind().id().to_string(),
        }
    }

    pub fn source_domain(&self) -> Domain {
        match self {
            Step::FisToTree { .. } | Step::FisToSeq => Domain::Itemset,
            Step::GraphToBdg3 { .. } | Step::GraphToEdges => Domain::Graph(GraphClass::General),
            Step::DigraphToEdges => Domain::Graph(GraphClass::Directed),
            Step::SeqToDag => Domain::Sequence,
        }
    }

    pub fn target_domain(&self) -> Domain {
        match self {
            Step::FisToTree { .. } => Domain::Graph(GraphClass::Tree),
            Step::FisToSeq => Domain::Sequence,
            Step::GraphToBdg3 { .. } => Domain::Graph(GraphClass::BoundedDegree(3)),
            Step::GraphToEdges | Step::DigraphToEdges => Domain::PairItemset,
            Step::SeqToDag => Domain::Graph(GraphClass::Dag),
        }
    }

    /// Largest label the step can emit when sources use labels up to `max`.
    pub fn target_max_label(&self, max: u32) -> u32 {
        match self {
            Step::FisToTree { root } => root.get().max(max),
            Step::GraphToBdg3 { n } => n * n,
            _ => max,
        }
    }

    /// Whether preimages of split-stable predicates stay split-stable. No
    /// built-in step guarantees it.
    pub fn preimage_closed(&self) -> bool {
        false
    }

    fn unrepresentable(&self, p: &Pattern) -> Error {
        Error::Unrepresentable {
            reduction: self.id(),
            pattern: p.to_string(),
        }
    }

    pub fn forward(&self, p: &Pattern) -> Result<Pattern> {
        self.source_domain().check_kind(p)?;
        match (self, p) {
            (Step::FisToTree { root }, Pattern::Items(s)) => {
                if s.contains(root) {
                    return Err(self.unrepresentable(p));
                }
                let edges = s.items().iter().map(|&i| (*root, i));
                let vertices = s.items().iter().copied().chain([*root]);
                Ok(LabelledGraph::new(false, vertices, edges)?.into())
            }
            (Step::FisToSeq, Pattern::Items(s)) => {
                Ok(Sequence::new(s.items().iter().copied())?.into())
            }
            (Step::GraphToBdg3 { n }, Pattern::Graph(g)) => {
                let n = *n;
                if g.vertices().iter().any(|v| v.get() > n) {
                    return Err(self.unrepresentable(p));
                }
                let code = |a: Label, i: Label| Label::new((a.get() - 1) * n + i.get());
                let mut vertices = Vec::new();
                let mut edges = Vec::new();
                for &v in g.vertices() {
                    for i in 1..=n {
                        vertices.push(Label::new((v.get() - 1) * n + i)?);
                        if i < n {
                            edges.push((
                                Label::new((v.get() - 1) * n + i)?,
                                Label::new((v.get() - 1) * n + i + 1)?,
                            ));
                        }
                    }
                }
                for &(u, v) in g.edges() {
                    edges.push((code(u, v)?, code(v, u)?));
                }
                Ok(LabelledGraph::new(false, vertices, edges)?.into())
            }
            (Step::GraphToEdges | Step::DigraphToEdges, Pattern::Graph(g)) => {
                let edges = g.edges().iter().map(|&(a, b)| LabelPair::new(a, b));
                let markers = g.vertices().iter().map(|&v| LabelPair::marker(v));
                Ok(Itemset::new(edges.chain(markers)).into())
            }
            (Step::SeqToDag, Pattern::Sequence(s)) => {
                if s.is_empty() {
                    return Err(self.unrepresentable(p));
                }
                let ev = s.events();
                let edges =
                    (0..ev.len()).flat_map(|i| (i + 1..ev.len()).map(move |j| (ev[i], ev[j])));
                Ok(LabelledGraph::new(true, ev.iter().copied(), edges)?.into())
            }
            _ => unreachable!("kind checked above"),
        }
    }

    /// The preimage of `q`, or `None` when `q` lies outside the image. A
    /// pattern of the wrong shape is an error.
    pub fn inverse(&self, q: &Pattern) -> Result<Option<Pattern>> {
        let target = self.target_domain();
        let admissible = match (target, q) {
            (Domain::Graph(c), Pattern::Graph(g)) => c.is_directed() == g.is_directed(),
            _ => target.admits_kind(q),
        };
        if !admissible {
            return Err(Error::mismatch(target, q.kind()));
        }
        Ok(match (self, q) {
            (Step::FisToTree { root }, Pattern::Graph(g)) => invert_star(g, *root),
            (Step::FisToSeq, Pattern::Sequence(s)) => s
                .is_ascending()
                .then(|| Itemset::new(s.events().iter().copied()).into()),
            (Step::GraphToBdg3 { n }, Pattern::Graph(g)) => invert_gadget(g, *n)?,
            (Step::GraphToEdges, Pattern::Pairs(s)) => invert_edges(s.items(), false)?,
            (Step::DigraphToEdges, Pattern::Pairs(s)) => invert_edges(s.items(), true)?,
            (Step::SeqToDag, Pattern::Graph(g)) => invert_tournament(g)?,
            _ => unreachable!("kind checked above"),
        })
    }

    /// Target feasibility for source feasibility `phi`: a target pattern is
    /// feasible when it has a preimage satisfying `phi`. The edge-itemset
    /// steps also state connectivity explicitly, which the miner prunes on.
    pub fn induced(&self, phi: &Predicate) -> Predicate {
        let pre = Predicate::preimage(Reduction::single(*self), phi.clone());
        match self {
            Step::GraphToEdges | Step::DigraphToEdges => {
                Predicate::and(vec![Predicate::ConnectedEdges, pre])
            }
            _ => pre,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

fn invert_star(g: &LabelledGraph, root: Label) -> Option<Pattern> {
    if !g.contains_vertex(root) || g.edge_count() + 1 != g.vertex_count() {
        return None;
    }
    let leaves: Vec<Label> = g
        .edges()
        .iter()
        .map(|&(a, b)| match (a == root, b == root) {
            (true, false) => Some(b),
            (false, true) => Some(a),
            _ => None,
        })
        .collect::<Option<_>>()?;
    Some(Itemset::new(leaves).into())
}

fn invert_gadget(g: &LabelledGraph, n: u32) -> Result<Option<Pattern>> {
    let decode = |x: Label| ((x.get() - 1) / n + 1, (x.get() - 1) % n + 1);
    let mut groups: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for &v in g.vertices() {
        let (a, i) = decode(v);
        if a > n {
            return Ok(None);
        }
        groups.entry(a).or_default().insert(i);
    }
    if groups
        .values()
        .any(|positions| positions.len() != n as usize)
    {
        return Ok(None);
    }
    let mut path_edges: BTreeMap<u32, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    for &(x, y) in g.edges() {
        let ((a, i), (b, j)) = (decode(x), decode(y));
        if a == b {
            if i.abs_diff(j) != 1 {
                return Ok(None);
            }
            *path_edges.entry(a).or_default() += 1;
        } else if i == b && j == a {
            edges.push((Label::new(a)?, Label::new(b)?));
        } else {
            return Ok(None);
        }
    }
    if groups
        .keys()
        .any(|a| path_edges.get(a).copied().unwrap_or(0) + 1 != n as usize)
    {
        return Ok(None);
    }
    let vertices = groups
        .keys()
        .map(|&a| Label::new(a))
        .collect::<Result<Vec<_>>>()?;
    let h = LabelledGraph::new(false, vertices, edges)?;
    Ok(h.is_connected().then(|| h.into()))
}

fn invert_edges(items: &[LabelPair], directed: bool) -> Result<Option<Pattern>> {
    let markers: BTreeSet<Label> = items
        .iter()
        .filter(|p| p.is_marker())
        .map(|p| p.first)
        .collect();
    let edges: Vec<(Label, Label)> = items
        .iter()
        .filter(|p| !p.is_marker())
        .map(|p| (p.first, p.second))
        .collect();
    if !directed && edges.iter().any(|&(a, b)| a > b) {
        return Ok(None);
    }
    let endpoints: BTreeSet<Label> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    let complete = if edges.is_empty() {
        markers.len() == 1
    } else {
        markers == endpoints
    };
    if !complete || !connected_pairs(items.iter().map(|p| (p.first, p.second))) {
        return Ok(None);
    }
    Ok(Some(LabelledGraph::new(directed, markers, edges)?.into()))
}

fn invert_tournament(g: &LabelledGraph) -> Result<Option<Pattern>> {
    let r = g.vertex_count();
    if g.edge_count() != r * (r - 1) / 2 {
        return Ok(None);
    }
    match g.topological_order() {
        Some(order) => Ok(Some(Sequence::new(order)?.into())),
        None => Ok(None),
    }
}

/// A chain of steps. The empty chain is the identity on every domain.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Reduction {
    steps: Vec<Step>,
}

impl Reduction {
    pub fn identity() -> Self {
        Reduction { steps: Vec::new() }
    }

    pub fn single(step: Step) -> Self {
        Reduction { steps: vec![step] }
    }

    /// A chain whose consecutive steps fit: each target domain is contained
    /// in the next source domain.
    pub fn chain(steps: Vec<Step>) -> Result<Self> {
        for pair in steps.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !a.target_domain().is_subdomain_of(&b.source_domain()) {
                return Err(Error::IncompatibleReductions(format!(
                    "{a} produces {} but {b} expects {}",
                    a.target_domain(),
                    b.source_domain()
                )));
            }
        }
        Ok(Reduction { steps })
    }

    pub fn compose(&self, next: &Reduction) -> Result<Self> {
        Reduction::chain(self.steps.iter().chain(&next.steps).copied().collect())
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn id(&self) -> String {
        match self.steps.as_slice() {
            [] => "identity".to_string(),
            [s] => s.id(),
            steps => format!(
                "compose:{}",
                steps.iter().map(Step::id).collect::<Vec<_>>().join(",")
            ),
        }
    }

    /// `None` for the identity.
    pub fn source_domain(&self) -> Option<Domain> {
        self.steps.first().map(Step::source_domain)
    }

    /// `None` for the identity.
    pub fn target_domain(&self) -> Option<Domain> {
        self.steps.last().map(Step::target_domain)
    }

    /// Whether databases of `domain` can be fed to this chain.
    pub fn accepts(&self, domain: Domain) -> bool {
        self.source_domain()
            .is_none_or(|s| domain.is_subdomain_of(&s))
    }

    pub fn output_domain(&self, input: Domain) -> Domain {
        self.target_domain().unwrap_or(input)
    }

    pub fn preimage_closed(&self) -> bool {
        self.steps.iter().all(Step::preimage_closed)
    }

    pub fn forward(&self, p: &Pattern) -> Result<Pattern> {
        let mut current = p.clone();
        for step in &self.steps {
            current = step.forward(&current)?;
        }
        Ok(current)
    }

    pub fn inverse(&self, q: &Pattern) -> Result<Option<Pattern>> {
        let mut current = q.clone();
        for step in self.steps.iter().rev() {
            match step.inverse(&current)? {
                Some(p) => current = p,
                None => return Ok(None),
            }
        }
        Ok(Some(current))
    }

    /// Target feasibility of the chain for source feasibility `phi`.
    ///
    /// For a chain `P → Q → R` with `φ_Q` induced by the first part, a target
    /// pattern `x` is feasible iff `φ_R(x)` holds for the last step's induced
    /// predicate, the last step inverts `x` to a pattern satisfying `φ_Q`, and
    /// the whole chain inverts `x` to a pattern satisfying `phi`. Longer chains
    /// fold this left to right.
    pub fn induced_feasibility(&self, phi: &Predicate) -> Predicate {
        let Some((first, rest)) = self.steps.split_first() else {
            return phi.clone();
        };
        let mut acc = first.induced(phi);
        for (j, step) in rest.iter().enumerate() {
            let prefix = Reduction {
                steps: self.steps[..=j + 1].to_vec(),
            };
            acc = Predicate::and(vec![
                step.induced(&acc),
                Predicate::preimage(Reduction::single(*step), acc.clone()),
                Predicate::preimage(prefix, phi.clone()),
            ]);
        }
        acc
    }

    /// Maps every transaction forward, preserving order and multiplicity.
    pub fn reduce_database(&self, db: &Database) -> Result<Database> {
        if !self.accepts(db.domain()) {
            return Err(Error::mismatch(
                self.source_domain().expect("identity accepts everything"),
                db.domain(),
            ));
        }
        let transactions = db
            .transactions()
            .par_iter()
            .enumerate()
            .map(|(index, t)| {
                self.forward(t).map_err(|e| Error::InvalidTransaction {
                    index,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Database::new(self.output_domain(db.domain()), transactions)
    }

    /// Inverts every target pattern; the result is in canonical order.
    pub fn lift_results(&self, target: &[Pattern]) -> Result<Vec<Pattern>> {
        let mut lifted = target
            .iter()
            .map(|q| {
                self.inverse(q)?.ok_or_else(|| Error::NoPreimage {
                    reduction: self.id(),
                    pattern: q.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        lifted.sort();
        Ok(lifted)
    }

    /// Appends the steps needed to land in an itemset domain, if any.
    pub fn complete_to_itemsets(&self, input: Domain) -> Result<Reduction> {
        let mut steps = self.steps.clone();
        loop {
            let current = steps.last().map_or(input, Step::target_domain);
            let next = match current {
                Domain::Itemset | Domain::PairItemset => return Reduction::chain(steps),
                Domain::Sequence => Step::SeqToDag,
                Domain::Graph(c) if c.is_directed() => Step::DigraphToEdges,
                Domain::Graph(_) => Step::GraphToEdges,
            };
            steps.push(next);
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// A reduction between feasible problems: the plain maps plus the source and
/// target feasibility predicates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FeasibleReduction {
    pub reduction: Reduction,
    pub source_phi: Predicate,
    pub target_phi: Predicate,
}

/// Keeps the maps of `r` and declares a target pattern feasible exactly when
/// its preimage exists and satisfies `phi`.
pub fn lift_to_ffbp(r: &Reduction, phi: &Predicate) -> FeasibleReduction {
    FeasibleReduction {
        reduction: r.clone(),
        source_phi: phi.clone(),
        target_phi: Predicate::preimage(r.clone(), phi.clone()),
    }
}

/// A reduction as written by a user: step kinds with optional parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionSpec {
    steps: Vec<(StepKind, Option<u32>)>,
}

impl ReductionSpec {
    pub fn identity() -> Self {
        ReductionSpec { steps: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// Binds missing parameters from the database: the tree root becomes one
    /// past the largest label, the path length becomes the largest label.
    pub fn bind(&self, db: &Database) -> Result<Reduction> {
        let mut max = db.max_label();
        let mut steps = Vec::new();
        for &(kind, param) in &self.steps {
            let param = param.or(match kind {
                StepKind::FisToTree => Some(max.checked_add(1).ok_or_else(|| {
                    Error::UnknownReduction("no fresh root label available".into())
                })?),
                StepKind::GraphToBdg3 => Some(max.max(1)),
                _ => None,
            });
            let step = kind.with_param(param)?;
            max = step.target_max_label(max);
            steps.push(step);
        }
        Reduction::chain(steps)
    }

    /// Binds without a database; every parameter must be explicit.
    pub fn bind_explicit(&self) -> Result<Reduction> {
        let steps = self
            .steps
            .iter()
            .map(|&(kind, param)| kind.with_param(param))
            .collect::<Result<Vec<_>>>()?;
        Reduction::chain(steps)
    }
}

impl FromStr for ReductionSpec {
    type Err = Error;

    /// `identity`, a single step id such as `g2fis` or `g2bdg3@3`, or
    /// `compose:<id>,<id>[,...]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "identity" {
            return Ok(ReductionSpec::identity());
        }
        let body = s.strip_prefix("compose:").unwrap_or(s);
        let steps = body
            .split(',')
            .map(|part| {
                let part = part.trim();
                let (name, param) = match part.split_once('@') {
                    Some((name, p)) => (
                        name,
                        Some(
                            p.parse::<u32>()
                                .map_err(|_| Error::UnknownReduction(part.to_string()))?,
                        ),
                    ),
                    None => (part, None),
                };
                Ok((name.parse::<StepKind>()?, param))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReductionSpec { steps })
    }
}

impl fmt::Display for ReductionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|(k, p)| match p {
                Some(p) => format!("{}@{p}", k.id()),
                None => k.id().to_string(),
            })
            .collect();
        match parts.len() {
            0 => write!(f, "identity"),
            1 => write!(f, "{}", parts[0]),
            _ => write!(f, "compose:{}", parts.join(",")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(x: u32) -> Label {
        Label::new(x).unwrap()
    }

    fn items(xs: &[u32]) -> Pattern {
        Pattern::items(xs.iter().copied()).unwrap()
    }

    fn seq(xs: &[u32]) -> Pattern {
        Sequence::new(xs.iter().map(|&x| l(x))).unwrap().into()
    }

    fn graph(directed: bool, edges: &[(u32, u32)]) -> Pattern {
        LabelledGraph::from_edges(directed, edges.iter().map(|&(a, b)| (l(a), l(b))))
            .unwrap()
            .into()
    }

    fn pairs(xs: &[(u32, u32)]) -> Pattern {
        Itemset::new(xs.iter().map(|&(a, b)| LabelPair::new(l(a), l(b)))).into()
    }

    fn bound(text: &str) -> Reduction {
        text.parse::<ReductionSpec>()
            .unwrap()
            .bind_explicit()
            .unwrap()
    }

    #[test]
    fn fis_to_tree_builds_stars() {
        let r = Step::FisToTree { root: l(4) };
        assert_eq!(
            r.forward(&items(&[1, 3])).unwrap(),
            graph(false, &[(4, 1), (4, 3)])
        );
        let single: Pattern = LabelledGraph::single_vertex(false, l(4)).into();
        assert_eq!(r.forward(&items(&[])).unwrap(), single);
        assert_eq!(r.inverse(&single).unwrap(), Some(items(&[])));
        assert_eq!(r.inverse(&graph(false, &[(1, 2), (2, 3)])).unwrap(), None);
        assert_eq!(r.inverse(&graph(false, &[(4, 1), (1, 2)])).unwrap(), None);
        assert!(r.forward(&items(&[4])).is_err());
    }

    #[test]
    fn fis_to_seq_orders_items() {
        let r = Step::FisToSeq;
        assert_eq!(r.forward(&items(&[3, 1, 2])).unwrap(), seq(&[1, 2, 3]));
        assert_eq!(r.forward(&items(&[])).unwrap(), seq(&[]));
        assert_eq!(r.inverse(&seq(&[2, 1])).unwrap(), None);
        assert_eq!(r.inverse(&seq(&[1, 2])).unwrap(), Some(items(&[1, 2])));
    }

    #[test]
    fn bdg3_gadget_for_single_edge() {
        let r = Step::GraphToBdg3 { n: 3 };
        let out = r.forward(&graph(false, &[(1, 2)])).unwrap();
        // (a, i) ↦ (a-1)*3 + i: (1,·) = 1..3, (2,·) = 4..6, cross edge (1,2)–(2,1) = 2–4
        let expected = graph(false, &[(1, 2), (2, 3), (4, 5), (5, 6), (2, 4)]);
        assert_eq!(out, expected);
        assert!(out.as_graph().unwrap().max_degree() <= 3);
        assert_eq!(r.inverse(&out).unwrap(), Some(graph(false, &[(1, 2)])));
        assert_eq!(r.inverse(&graph(false, &[(1, 2)])).unwrap(), None);
    }

    #[test]
    fn bdg3_degenerate_path() {
        let r = Step::GraphToBdg3 { n: 1 };
        let v: Pattern = LabelledGraph::single_vertex(false, l(1)).into();
        assert_eq!(r.forward(&v).unwrap(), v);
        assert_eq!(r.inverse(&v).unwrap(), Some(v));
    }

    #[test]
    fn bdg3_rejects_inconsistent_cross_edges() {
        let r = Step::GraphToBdg3 { n: 2 };
        // groups 1 = {1,2}, 2 = {3,4}; the right cross edge is (1,2)–(2,1) = 2–3
        assert!(r
            .inverse(&graph(false, &[(1, 2), (3, 4), (2, 3)]))
            .unwrap()
            .is_some());
        assert_eq!(
            r.inverse(&graph(false, &[(1, 2), (3, 4), (1, 3)])).unwrap(),
            None
        );
    }

    #[test]
    fn edge_itemsets_with_markers() {
        let r = Step::GraphToEdges;
        let triangle = graph(false, &[(1, 2), (2, 3), (1, 3)]);
        let image = r.forward(&triangle).unwrap();
        assert_eq!(
            image,
            pairs(&[(1, 2), (1, 3), (2, 3), (1, 1), (2, 2), (3, 3)])
        );
        assert_eq!(r.inverse(&image).unwrap(), Some(triangle));
        assert_eq!(
            r.forward(&graph(false, &[(7, 4)])).unwrap(),
            pairs(&[(4, 7), (4, 4), (7, 7)])
        );
        assert_eq!(
            r.inverse(&pairs(&[(1, 2), (3, 4), (1, 1), (2, 2), (3, 3), (4, 4)]))
                .unwrap(),
            None
        );
        assert_eq!(r.inverse(&pairs(&[(1, 2), (1, 1)])).unwrap(), None);
        let vertex: Pattern = LabelledGraph::single_vertex(false, l(5)).into();
        assert_eq!(r.inverse(&pairs(&[(5, 5)])).unwrap(), Some(vertex));
    }

    #[test]
    fn directed_edge_itemsets_keep_orientation() {
        let r = Step::DigraphToEdges;
        let two_cycle = graph(true, &[(1, 2), (2, 1)]);
        assert_eq!(
            r.forward(&two_cycle).unwrap(),
            pairs(&[(1, 2), (2, 1), (1, 1), (2, 2)])
        );
        assert_eq!(
            r.forward(&graph(true, &[(3, 1)])).unwrap(),
            pairs(&[(3, 1), (1, 1), (3, 3)])
        );
        let path = pairs(&[(1, 2), (2, 3), (1, 1), (2, 2), (3, 3)]);
        assert_eq!(
            r.inverse(&path).unwrap(),
            Some(graph(true, &[(1, 2), (2, 3)]))
        );
    }

    #[test]
    fn sequences_become_tournaments() {
        let r = Step::SeqToDag;
        assert_eq!(
            r.forward(&seq(&[1, 3, 2])).unwrap(),
            graph(true, &[(1, 3), (1, 2), (3, 2)])
        );
        let five: Pattern = LabelledGraph::single_vertex(true, l(5)).into();
        assert_eq!(r.forward(&seq(&[5])).unwrap(), five);
        assert_eq!(r.inverse(&graph(true, &[(1, 2), (2, 3)])).unwrap(), None);
        assert!(r.forward(&seq(&[])).is_err());
    }

    #[test]
    fn lifting_plain_reductions() {
        let lifted = lift_to_ffbp(
            &Reduction::single(Step::FisToTree { root: l(4) }),
            &Predicate::Always,
        );
        assert!(lifted
            .target_phi
            .eval(&graph(false, &[(4, 1), (4, 2)]))
            .unwrap());
        assert!(!lifted
            .target_phi
            .eval(&graph(false, &[(1, 2), (2, 3)]))
            .unwrap());
        let lifted = lift_to_ffbp(&bound("fis2seq"), &Predicate::Always);
        assert!(lifted.target_phi.eval(&seq(&[1, 2])).unwrap());
        assert!(!lifted.target_phi.eval(&seq(&[2, 1])).unwrap());
    }

    #[test]
    fn composition_chains_constructions() {
        let r = bound("compose:fis2seq,seq2dag");
        assert_eq!(r.forward(&items(&[1, 3])).unwrap(), graph(true, &[(1, 3)]));
        let star = r.induced_feasibility(&Predicate::Always);
        assert!(star.eval(&graph(true, &[(1, 3)])).unwrap());
        assert!(!star.eval(&graph(true, &[(3, 1)])).unwrap());
        let id = Reduction::identity();
        assert_eq!(r.compose(&id).unwrap(), r);
        assert!(bound("fis2seq").compose(&bound("g2fis")).is_err());
    }

    #[test]
    fn chains_complete_to_itemsets() {
        let r = Reduction::identity()
            .complete_to_itemsets(Domain::Sequence)
            .unwrap();
        assert_eq!(r.id(), "compose:seq2dag,dirg2fis");
        let r = Reduction::identity()
            .complete_to_itemsets(Domain::Itemset)
            .unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn specs_parse_and_bind() {
        let db = Database::itemsets([vec![1, 5], vec![2]]).unwrap();
        let r = "fis2tree"
            .parse::<ReductionSpec>()
            .unwrap()
            .bind(&db)
            .unwrap();
        assert_eq!(r.id(), "fis2tree@6");
        let r = "compose:fis2tree,g2bdg3"
            .parse::<ReductionSpec>()
            .unwrap()
            .bind(&db)
            .unwrap();
        assert_eq!(r.id(), "compose:fis2tree@6,g2bdg3@6");
        assert!("nope".parse::<ReductionSpec>().is_err());
        assert!("g2fis@2"
            .parse::<ReductionSpec>()
            .unwrap()
            .bind_explicit()
            .is_err());
        for id in ["identity", "g2bdg3@3", "compose:fis2seq,seq2dag"] {
            assert_eq!(id.parse::<ReductionSpec>().unwrap().to_string(), id);
        }
    }

    #[test]
    fn lift_results_reports_bad_patterns() {
        let r = Reduction::single(Step::FisToTree { root: l(4) });
        let lifted = r.lift_results(&[graph(false, &[(4, 1), (4, 3)])]).unwrap();
        assert_eq!(lifted, vec![items(&[1, 3])]);
        assert!(r.lift_results(&[]).unwrap().is_empty());
        assert!(matches!(
            r.lift_results(&[graph(false, &[(1, 2)])]),
            Err(Error::NoPreimage { .. })
        ));
    }
}
