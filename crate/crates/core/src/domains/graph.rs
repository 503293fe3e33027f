use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::domains::itemset::is_sorted_subset;
use crate::error::{Error, Result};
use crate::model::Label;

/// A graph whose vertices are identified by their (unique) labels.
///
/// Undirected edges are stored smaller label first. Field order fixes the
/// canonical ordering: edge list first, then vertex list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LabelledGraph {
    directed: bool,
    edges: Vec<(Label, Label)>,
    vertices: Vec<Label>,
}

impl LabelledGraph {
    /// Every edge endpoint must be listed among `vertices`.
    pub fn new<V, E>(directed: bool, vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let vertices: BTreeSet<Label> = vertices.into_iter().collect();
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidPattern(format!("self-loop on vertex {a}")));
            }
            for v in [a, b] {
                if !vertices.contains(&v) {
                    return Err(Error::InvalidPattern(format!(
                        "edge {a}-{b} uses undeclared vertex {v}"
                    )));
                }
            }
            normalized.push(if directed || a < b { (a, b) } else { (b, a) });
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(LabelledGraph {
            directed,
            edges: normalized,
            vertices: vertices.into_iter().collect(),
        })
    }

    /// A graph spanned by its edges.
    pub fn from_edges<E>(directed: bool, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (Label, Label)>,
    {
        let edges: Vec<(Label, Label)> = edges.into_iter().collect();
        let vertices: Vec<Label> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        LabelledGraph::new(directed, vertices, edges)
    }

    pub fn single_vertex(directed: bool, v: Label) -> Self {
        LabelledGraph {
            directed,
            edges: Vec::new(),
            vertices: vec![v],
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertices(&self) -> &[Label] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Label, Label)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: Label) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Edge lookup; for undirected graphs the endpoint order is irrelevant.
    pub fn contains_edge(&self, a: Label, b: Label) -> bool {
        let key = if self.directed || a < b {
            (a, b)
        } else {
            (b, a)
        };
        self.edges.binary_search(&key).is_ok()
    }

    /// Number of incident edges, counting both directions for digraphs.
    pub fn degree(&self, v: Label) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        let mut degree: BTreeMap<Label, usize> = BTreeMap::new();
        for &(a, b) in &self.edges {
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        degree.values().copied().max().unwrap_or(0)
    }

    fn undirected_adjacency(&self) -> BTreeMap<Label, Vec<Label>> {
        let mut adj: BTreeMap<Label, Vec<Label>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    /// Connectivity of the undirected view. The empty graph is not connected.
    pub fn is_connected(&self) -> bool {
        self.components_vertices().len() == 1
    }

    fn components_vertices(&self) -> Vec<Vec<Label>> {
        let adj = self.undirected_adjacency();
        let mut seen = BTreeSet::new();
        let mut components = Vec::new();
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[&v] {
                    if seen.insert(w) {
                        component.push(w);
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Connected components (undirected view), ordered by smallest label.
    pub fn components(&self) -> Vec<LabelledGraph> {
        self.components_vertices()
            .into_iter()
            .map(|vs| {
                let edges = self
                    .edges
                    .iter()
                    .filter(|(a, _)| vs.binary_search(a).is_ok())
                    .copied()
                    .collect();
                LabelledGraph {
                    directed: self.directed,
                    edges,
                    vertices: vs,
                }
            })
            .collect()
    }

    /// Whether the directed graph has no directed cycle (Kahn's algorithm).
    pub fn is_acyclic_directed(&self) -> bool {
        self.topological_order().is_some()
    }

    /// A topological order (smallest available label first), if one exists.
    pub fn topological_order(&self) -> Option<Vec<Label>> {
        let mut indegree: BTreeMap<Label, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        let mut out: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
        for &(a, b) in &self.edges {
            *indegree.get_mut(&b)? += 1;
            out.entry(a).or_default().push(b);
        }
        let mut ready: BTreeSet<Label> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&v, _)| v)
            .collect();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for w in out.get(&v).into_iter().flatten() {
                let d = indegree.get_mut(w)?;
                *d -= 1;
                if *d == 0 {
                    ready.insert(*w);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    /// Whether the undirected view contains no cycle.
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components_vertices().len() == self.vertices.len()
    }
}

impl fmt::Display for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.directed { "->" } else { "-" };
        let mut parts: Vec<String> = self
            .edges
            .iter()
            .map(|(a, b)| format!("{a}{arrow}{b}"))
            .collect();
        let mut touched = BTreeSet::new();
        for &(a, b) in &self.edges {
            touched.insert(a);
            touched.insert(b);
        }
        parts.extend(
            self.vertices
                .iter()
                .filter(|v| !touched.contains(v))
                .map(|v| v.to_string()),
        );
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Graph classes of the supported subgraph-mining problems. All classes are
/// restricted to connected, uniquely labelled graphs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GraphClass {
    /// Undirected trees (`T`).
    Tree,
    /// Undirected graphs of maximum degree at most `b` (`BDG(b)`).
    BoundedDegree(u32),
    /// Undirected graphs (`G`).
    General,
    /// Directed acyclic graphs.
    Dag,
    /// Directed graphs (`DirG`).
    Directed,
}

impl GraphClass {
    pub fn is_directed(self) -> bool {
        matches!(self, GraphClass::Dag | GraphClass::Directed)
    }

    pub fn validate(self, g: &LabelledGraph) -> bool {
        validate_class(g, self)
    }

    pub fn is_subclass_of(self, other: GraphClass) -> bool {
        use GraphClass::*;
        match (self, other) {
            (a, b) if a == b => true,
            (Tree | BoundedDegree(_), General) => true,
            (BoundedDegree(a), BoundedDegree(b)) => a <= b,
            (Dag, Directed) => true,
            _ => false,
        }
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphClass::Tree => write!(f, "T"),
            GraphClass::BoundedDegree(b) => write!(f, "BDG({b})"),
            GraphClass::General => write!(f, "G"),
            GraphClass::Dag => write!(f, "DAG"),
            GraphClass::Directed => write!(f, "DirG"),
        }
    }
}

impl FromStr for GraphClass {
    type Err = Error;

    /// Accepts `T`/`tree`, `G`/`graph`, `DAG`, `DirG`, and `BDG(b)`, `bdg:b`
    /// or `bdgb` for bounded degree, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let class = match lower.as_str() {
            "t" | "tree" => GraphClass::Tree,
            "g" | "graph" | "general" => GraphClass::General,
            "dag" => GraphClass::Dag,
            "dirg" | "digraph" | "directed" => GraphClass::Directed,
            other => {
                let digits = other
                    .strip_prefix("bdg")
                    .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
                    .ok_or_else(|| Error::Usage(format!("unknown graph class `{s}`")))?;
                let b: u32 = digits
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad degree bound in `{s}`")))?;
                if b == 0 {
                    return Err(Error::Usage("degree bound must be at least 1".into()));
                }
                GraphClass::BoundedDegree(b)
            }
        };
        Ok(class)
    }
}

/// `g ⊑ h`: vertices and edges of `g` are among those of `h`. Labels force the
/// embedding, so no isomorphism search is involved.
pub fn graph_leq(g: &LabelledGraph, h: &LabelledGraph) -> Result<bool> {
    if g.directed != h.directed {
        return Err(Error::mismatch(
            if h.directed {
                "directed graph"
            } else {
                "undirected graph"
            },
            if g.directed {
                "directed graph"
            } else {
                "undirected graph"
            },
        ));
    }
    Ok(is_sorted_subset(&g.vertices, &h.vertices) && is_sorted_subset(&g.edges, &h.edges))
}

/// Class membership; every class additionally requires connectivity.
pub fn validate_class(g: &LabelledGraph, class: GraphClass) -> bool {
    if g.directed != class.is_directed() || !g.is_connected() {
        return false;
    }
    match class {
        GraphClass::Tree => g.edge_count() + 1 == g.vertex_count(),
        GraphClass::BoundedDegree(b) => g.max_degree() <= b as usize,
        GraphClass::General | GraphClass::Directed => true,
        GraphClass::Dag => g.is_acyclic_directed(),
    }
}
