//! Text formats for databases and pattern lists.
//!
//! * Lines (FIMI style): one transaction per line, whitespace-separated
//!   tokens. Tokens are labels for itemsets and sequences and `a,b` pairs for
//!   pair itemsets. Sequence lines keep their order and may not repeat a label.
//! * gSpan style for graphs: an optional `d` line marking a directed database,
//!   then blocks `t # <id>`, `v <label>`, `e <label> <label>`; `t # -1` ends
//!   the input.
//!
//! Lines starting with `#` are comments in both formats. In the lines format
//! a blank line is an empty transaction; in gSpan text blank lines are skipped.
//! [`write_database`] produces canonical text that parses back to an equal
//! database.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::domains::{GraphClass, Itemset, LabelledGraph, Sequence};
use crate::error::{Error, Result};
use crate::model::{Database, Domain, Label, LabelPair, Pattern};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Format {
    /// One transaction per line.
    Lines,
    Gspan,
    /// Directory or list of `src dst` edge-list files, one graph each.
    EdgeList,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fimi" | "lines" => Ok(Format::Lines),
            "gspan" => Ok(Format::Gspan),
            "edgelist" => Ok(Format::EdgeList),
            _ => Err(Error::Usage(format!(
                "unknown format `{s}` (fimi, gspan, edgelist)"
            ))),
        }
    }
}

impl Format {
    pub fn default_for(domain: Domain) -> Format {
        match domain {
            Domain::Graph(_) => Format::Gspan,
            _ => Format::Lines,
        }
    }
}

/// Whether disconnected input graphs are rejected or split into one
/// transaction per connected component.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum Components {
    #[default]
    Keep,
    Split,
}

impl FromStr for Components {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keep" => Ok(Components::Keep),
            "split" => Ok(Components::Split),
            _ => Err(Error::Usage(format!(
                "unknown component mode `{s}` (keep, split)"
            ))),
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
}

fn label_tokens(content: &str) -> Result<Vec<Label>> {
    content.split_whitespace().map(str::parse).collect()
}

fn parse_rows<T, F>(text: &str, mut row: F) -> Result<Vec<T>>
where
    F: FnMut(&str) -> Result<T>,
{
    let mut out = Vec::new();
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() && !text.contains('\n') {
        return Ok(out);
    }
    for (i, raw) in body.split('\n').enumerate() {
        let content = raw.trim();
        if content.starts_with('#') {
            continue;
        }
        out.push(row(content).map_err(|e| parse_error(i + 1, e.to_string()))?);
    }
    Ok(out)
}

pub fn parse_itemset_db(text: &str) -> Result<Database> {
    let rows = parse_rows(text, |c| Ok(Pattern::Items(Itemset::new(label_tokens(c)?))))?;
    Database::new(Domain::Itemset, rows)
}

pub fn parse_pair_db(text: &str) -> Result<Database> {
    let rows = parse_rows(text, |c| {
        let pairs = c
            .split_whitespace()
            .map(str::parse::<LabelPair>)
            .collect::<Result<Vec<_>>>()?;
        Ok(Pattern::Pairs(Itemset::new(pairs)))
    })?;
    Database::new(Domain::PairItemset, rows)
}

pub fn parse_sequence_db(text: &str) -> Result<Database> {
    let rows = parse_rows(text, |c| {
        Ok(Pattern::Sequence(Sequence::new(label_tokens(c)?)?))
    })?;
    Database::new(Domain::Sequence, rows)
}

struct Block {
    line: usize,
    vertices: Vec<Label>,
    edges: Vec<(Label, Label)>,
}

/// Parses gSpan-style text. Without an explicit class the database is `G`, or
/// `DirG` when the `d` flag is present.
pub fn parse_graph_db(
    text: &str,
    class: Option<GraphClass>,
    components: Components,
) -> Result<Database> {
    let mut directed = false;
    let mut blocks: Vec<Block> = Vec::new();
    for (line, content) in content_lines(text) {
        let mut tokens = content.split_whitespace();
        let Some(head) = tokens.next() else { continue };
        let rest: Vec<&str> = tokens.collect();
        match head {
            "d" if blocks.is_empty() && rest.is_empty() => directed = true,
            "t" => {
                if rest.len() != 2 || rest[0] != "#" {
                    return Err(parse_error(line, "expected `t # <id>`"));
                }
                if rest[1] == "-1" {
                    break;
                }
                blocks.push(Block {
                    line,
                    vertices: Vec::new(),
                    edges: Vec::new(),
                });
            }
            "v" | "e" => {
                let block = blocks.last_mut().ok_or_else(|| {
                    parse_error(line, format!("`{head}` before the first `t` line"))
                })?;
                let labels: Vec<Label> = rest
                    .iter()
                    .map(|t| t.parse::<Label>())
                    .collect::<Result<_>>()
                    .map_err(|e| parse_error(line, e.to_string()))?;
                match (head, labels.as_slice()) {
                    ("v", &[v]) => {
                        if block.vertices.contains(&v) {
                            return Err(parse_error(
                                line,
                                format!("vertex label {v} repeated in one graph"),
                            ));
                        }
                        block.vertices.push(v);
                    }
                    ("e", &[a, b]) => {
                        if !block.vertices.contains(&a) || !block.vertices.contains(&b) {
                            return Err(parse_error(
                                line,
                                format!("edge {a} {b} uses an undeclared vertex"),
                            ));
                        }
                        block.edges.push((a, b));
                    }
                    ("v", _) => return Err(parse_error(line, "expected `v <label>`")),
                    _ => return Err(parse_error(line, "expected `e <label> <label>`")),
                }
            }
            _ => return Err(parse_error(line, format!("unexpected line `{content}`"))),
        }
    }
    let class = class.unwrap_or(if directed {
        GraphClass::Directed
    } else {
        GraphClass::General
    });
    if class.is_directed() != directed {
        return Err(Error::Usage(format!(
            "class {class} does not match a {} input",
            if directed { "directed" } else { "undirected" }
        )));
    }
    let mut rows = Vec::new();
    for block in blocks {
        let g = LabelledGraph::new(directed, block.vertices, block.edges)
            .map_err(|e| parse_error(block.line, e.to_string()))?;
        match components {
            Components::Keep => rows.push(Pattern::Graph(g)),
            Components::Split => rows.extend(g.components().into_iter().map(Pattern::Graph)),
        }
    }
    Database::new(Domain::Graph(class), rows)
}

/// Parses a database of the given domain in its default format.
pub fn parse_database(text: &str, domain: Domain, components: Components) -> Result<Database> {
    match domain {
        Domain::Itemset => parse_itemset_db(text),
        Domain::PairItemset => parse_pair_db(text),
        Domain::Sequence => parse_sequence_db(text),
        Domain::Graph(c) => parse_graph_db(text, Some(c), components),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// A transaction as a line of the lines format; graphs are not line-shaped.
pub fn pattern_line(p: &Pattern) -> Option<String> {
    match p {
        Pattern::Items(s) => Some(join(s.items())),
        Pattern::Pairs(s) => Some(join(s.items())),
        Pattern::Sequence(s) => Some(join(s.events())),
        Pattern::Graph(_) => None,
    }
}

fn write_graph(out: &mut String, id: usize, g: &LabelledGraph) {
    writeln!(out, "t # {id}").expect("writing to a string");
    for v in g.vertices() {
        writeln!(out, "v {v}").expect("writing to a string");
    }
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}").expect("writing to a string");
    }
}

/// Graphs as gSpan blocks, everything else one transaction per line.
pub fn write_patterns(patterns: &[Pattern], directed: bool) -> String {
    let mut out = String::new();
    if directed {
        out.push_str("d\n");
    }
    for (i, p) in patterns.iter().enumerate() {
        match p {
            Pattern::Graph(g) => write_graph(&mut out, i, g),
            other => {
                out.push_str(&pattern_line(other).expect("line-shaped"));
                out.push('\n');
            }
        }
    }
    out
}

pub fn write_database(db: &Database) -> String {
    let directed = matches!(db.domain(), Domain::Graph(c) if c.is_directed());
    write_patterns(db.transactions(), directed)
}
