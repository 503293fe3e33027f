//! Graph databases from raw edge-list files, one graph per file.
//!
//! Each non-comment line holds `src dst` as positive integer ids, which
//! become the vertex labels. Further columns (weights, timestamps) are
//! ignored. Lines starting with `#` or `%` are comments.

use std::path::{Path, PathBuf};

use crate::domains::{GraphClass, LabelledGraph};
use crate::error::{Error, Result};
use crate::model::{Database, Domain, Label, Pattern};

use super::format::Components;

#[derive(Clone, Debug)]
pub struct Ingested {
    pub database: Database,
    pub warnings: Vec<String>,
}

/// Builds the graph of one edge list; `None` when no edge survives.
fn graph_of(
    name: &str,
    text: &str,
    directed: bool,
    warnings: &mut Vec<String>,
) -> Result<Option<LabelledGraph>> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("{name}: expected `src dst`"),
            });
        };
        let parse = |t: &str| {
            t.parse::<Label>().map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("{name}: {e}"),
            })
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a == b {
            warnings.push(format!("{name}:{}: self-loop on {a} skipped", i + 1));
            continue;
        }
        edges.push((a, b));
    }
    if edges.is_empty() {
        warnings.push(format!("{name}: no edges, file skipped"));
        return Ok(None);
    }
    Ok(Some(LabelledGraph::from_edges(directed, edges)?))
}

/// Ingests named edge-list texts in the given order.
pub fn ingest_texts<'a, I>(files: I, directed: bool, components: Components) -> Result<Ingested>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    for (name, text) in files {
        if let Some(g) = graph_of(name, text, directed, &mut warnings)? {
            match components {
                Components::Keep => rows.push(Pattern::Graph(g)),
                Components::Split => rows.extend(g.components().into_iter().map(Pattern::Graph)),
            }
        }
    }
    let class = if directed {
        GraphClass::Directed
    } else {
        GraphClass::General
    };
    Ok(Ingested {
        database: Database::new(Domain::Graph(class), rows)?,
        warnings,
    })
}

/// Expands directories into their files, sorted by name.
pub fn expand_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            entries.retain(|e| e.is_file());
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn ingest_edge_lists<P: AsRef<Path>>(
    paths: &[P],
    directed: bool,
    components: Components,
) -> Result<Ingested> {
    let paths: Vec<PathBuf> = paths.iter().map(|p| p.as_ref().to_path_buf()).collect();
    let files = expand_paths(&paths)?;
    let texts = files
        .iter()
        .map(|f| Ok((f.display().to_string(), std::fs::read_to_string(f)?)))
        .collect::<Result<Vec<(String, String)>>>()?;
    ingest_texts(
        texts.iter().map(|(n, t)| (n.as_str(), t.as_str())),
        directed,
        components,
    )
}
