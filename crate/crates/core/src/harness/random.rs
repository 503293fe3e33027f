//! Seeded random instances for property checks and verification runs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::domains::{GraphClass, Itemset, LabelledGraph, Sequence};
use crate::model::{Database, Domain, Label, LabelPair, Pattern};
use crate::reductions::Step;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits of a random database.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    /// Labels are drawn from `1..=labels`.
    pub labels: u32,
    /// Number of transactions, at least 1.
    pub transactions: usize,
    /// Largest transaction: items, events, or vertices of a graph.
    pub max_size: usize,
    /// Extra edges beyond a spanning tree in a graph's base pattern.
    pub extra_edges: usize,
}

fn label(x: u32) -> Label {
    Label::new(x).expect("labels start at 1")
}

fn sample_labels(rng: &mut Rng8, labels: u32, k: usize) -> Vec<Label> {
    let mut all: Vec<u32> = (1..=labels).collect();
    all.shuffle(rng);
    all.truncate(k.min(labels as usize));
    all.into_iter().map(label).collect()
}

fn transaction_count(rng: &mut Rng8, shape: &Shape) -> usize {
    rng.gen_range(1..=shape.transactions.max(1))
}

/// Transactions scattered around a few base itemsets, so that some patterns
/// recur at every threshold.
pub fn itemset_db(rng: &mut Rng8, shape: &Shape) -> Database {
    let bases: Vec<Vec<Label>> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let k = rng.gen_range(1..=shape.max_size.max(1));
            sample_labels(rng, shape.labels, k)
        })
        .collect();
    let rows = (0..transaction_count(rng, shape))
        .map(|_| {
            let mut t: Vec<Label> = bases.choose(rng).expect("non-empty").clone();
            t.retain(|_| rng.gen_bool(0.8));
            for _ in 0..rng.gen_range(0..=2) {
                t.push(label(rng.gen_range(1..=shape.labels)));
            }
            t.sort_unstable();
            t.dedup();
            t.shuffle(rng);
            t.truncate(shape.max_size);
            Pattern::Items(Itemset::new(t))
        })
        .collect();
    Database::new(Domain::Itemset, rows).expect("valid itemsets")
}

pub fn sequence_db(rng: &mut Rng8, shape: &Shape) -> Database {
    let bases: Vec<Vec<Label>> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let k = rng.gen_range(1..=shape.max_size.max(1));
            sample_labels(rng, shape.labels, k)
        })
        .collect();
    let rows = (0..transaction_count(rng, shape))
        .map(|_| {
            let mut t: Vec<Label> = bases.choose(rng).expect("non-empty").clone();
            t.retain(|_| rng.gen_bool(0.8));
            if rng.gen_bool(0.3) && t.len() >= 2 {
                let (i, j) = (rng.gen_range(0..t.len()), rng.gen_range(0..t.len()));
                t.swap(i, j);
            }
            let extra = label(rng.gen_range(1..=shape.labels));
            if !t.contains(&extra) && t.len() < shape.max_size {
                let at = rng.gen_range(0..=t.len());
                t.insert(at, extra);
            }
            Pattern::Sequence(Sequence::new(t).expect("distinct labels"))
        })
        .collect();
    Database::new(Domain::Sequence, rows).expect("valid sequences")
}

/// A connected base graph of the class on up to `max_size` vertices.
pub fn base_graph(rng: &mut Rng8, class: GraphClass, shape: &Shape) -> LabelledGraph {
    let k = rng.gen_range(1..=shape.max_size.max(1));
    let vs = sample_labels(rng, shape.labels, k);
    let bound = match class {
        GraphClass::BoundedDegree(b) => b as usize,
        _ => usize::MAX,
    };
    let mut degree = vec![0usize; vs.len()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut attached = 1;
    for i in 1..vs.len() {
        let open: Vec<usize> = (0..i).filter(|&j| degree[j] < bound).collect();
        let Some(&j) = open.choose(rng) else { break };
        degree[i] += 1;
        degree[j] += 1;
        edges.push((j, i));
        attached = i + 1;
    }
    if class != GraphClass::Tree {
        for _ in 0..shape.extra_edges {
            let (a, b) = (rng.gen_range(0..attached), rng.gen_range(0..attached));
            if a != b
                && degree[a] < bound
                && degree[b] < bound
                && !edges.contains(&(a, b))
                && !edges.contains(&(b, a))
            {
                degree[a] += 1;
                degree[b] += 1;
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    let directed = class.is_directed();
    let oriented = edges.into_iter().map(|(a, b)| match class {
        // vertices were attached in order, so lower index to higher is acyclic
        GraphClass::Dag => (vs[a], vs[b]),
        GraphClass::Directed if rng.gen_bool(0.5) => (vs[b], vs[a]),
        _ => (vs[a], vs[b]),
    });
    let oriented: Vec<(Label, Label)> = oriented.collect();
    let mut all_edges = oriented.clone();
    if class == GraphClass::Directed && !oriented.is_empty() && rng.gen_bool(0.3) {
        let &(a, b) = oriented.choose(rng).expect("non-empty");
        all_edges.push((b, a));
    }
    LabelledGraph::new(directed, vs[..attached].iter().copied(), all_edges)
        .expect("valid base graph")
}

/// A random connected subgraph of `g`, grown from one vertex.
pub fn connected_subgraph(rng: &mut Rng8, g: &LabelledGraph) -> LabelledGraph {
    let start = *g.vertices().choose(rng).expect("graphs have a vertex");
    let mut vertices = vec![start];
    let mut edges: Vec<(Label, Label)> = Vec::new();
    let target = rng.gen_range(0..=g.edge_count());
    for _ in 0..target * 2 {
        let frontier: Vec<(Label, Label)> = g
            .edges()
            .iter()
            .copied()
            .filter(|e| !edges.contains(e) && (vertices.contains(&e.0) || vertices.contains(&e.1)))
            .collect();
        let Some(&e) = frontier.choose(rng) else {
            break;
        };
        if edges.len() >= target {
            break;
        }
        edges.push(e);
        for v in [e.0, e.1] {
            if !vertices.contains(&v) {
                vertices.push(v);
            }
        }
    }
    LabelledGraph::new(g.is_directed(), vertices, edges).expect("sub-structure of a valid graph")
}

pub fn graph_db(rng: &mut Rng8, class: GraphClass, shape: &Shape) -> Database {
    let base = base_graph(rng, class, shape);
    let mut rows: Vec<Pattern> = Vec::new();
    for _ in 0..transaction_count(rng, shape) {
        let t = match rows.last() {
            Some(prev) if rng.gen_bool(0.25) => prev.clone(),
            _ if rng.gen_bool(0.3) => base.clone().into(),
            _ => connected_subgraph(rng, &base).into(),
        };
        rows.push(t);
    }
    Database::new(Domain::Graph(class), rows).expect("subgraphs stay in the class")
}

/// Pair itemsets: the edge itemsets of random graphs mixed with arbitrary
/// pair sets that need not describe a graph.
pub fn pair_db(rng: &mut Rng8, shape: &Shape) -> Database {
    let base = base_graph(rng, GraphClass::General, shape);
    let rows = (0..transaction_count(rng, shape))
        .map(|_| {
            if rng.gen_bool(0.7) {
                let g = connected_subgraph(rng, &base);
                Step::GraphToEdges
                    .forward(&g.into())
                    .expect("undirected graph")
            } else {
                let k = rng.gen_range(0..=shape.max_size);
                let ps: Vec<LabelPair> = (0..k)
                    .map(|_| {
                        let a = rng.gen_range(1..=shape.labels);
                        let b = if rng.gen_bool(0.3) {
                            a
                        } else {
                            rng.gen_range(1..=shape.labels)
                        };
                        LabelPair::undirected(label(a), label(b))
                    })
                    .collect();
                Pattern::Pairs(Itemset::new(ps))
            }
        })
        .collect();
    Database::new(Domain::PairItemset, rows).expect("valid pair itemsets")
}

/// A random instance of `domain`.
pub fn database(rng: &mut Rng8, domain: Domain, shape: &Shape) -> Database {
    match domain {
        Domain::Itemset => itemset_db(rng, shape),
        Domain::PairItemset => pair_db(rng, shape),
        Domain::Sequence => sequence_db(rng, shape),
        Domain::Graph(c) => graph_db(rng, c, shape),
    }
}

/// Two random sub-patterns of the database's transactions, for order checks.
pub fn pattern_pair(rng: &mut Rng8, db: &Database) -> Option<(Pattern, Pattern)> {
    let t = db.transactions().choose(rng)?;
    let u = db.transactions().choose(rng)?;
    let shrink = |rng: &mut Rng8, t: &Pattern| -> Pattern {
        match t {
            Pattern::Items(s) => {
                Itemset::new(s.items().iter().copied().filter(|_| rng.gen_bool(0.7))).into()
            }
            Pattern::Pairs(s) => {
                Itemset::new(s.items().iter().copied().filter(|_| rng.gen_bool(0.7))).into()
            }
            Pattern::Sequence(s) => {
                Sequence::new(s.events().iter().copied().filter(|_| rng.gen_bool(0.7)))
                    .expect("subsequence")
                    .into()
            }
            Pattern::Graph(g) => connected_subgraph(rng, g).into(),
        }
    };
    let a = shrink(rng, t);
    let b = if rng.gen_bool(0.5) {
        shrink(rng, t)
    } else {
        shrink(rng, u)
    };
    Some((a, b))
}
