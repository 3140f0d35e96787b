//! Plain-text graph, subgraph and pair files.
//!
//! Graph: a header `n m directed weighted` (flags are `0`/`1`) followed by
//! `m` lines `u v` or `u v w`. Pairs: one `s t` per line. Blank lines and
//! lines starting with `#` are ignored. A subgraph is written as a graph
//! holding only the kept edges and read back by matching endpoints.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path as FsPath;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, NodeId, Subgraph};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-comment lines as (1-based line number, fields).
fn records<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, Vec<String>)>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) => {
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                None
            } else {
                Some(Ok((
                    i + 1,
                    l.split_whitespace().map(str::to_string).collect(),
                )))
            }
        }
    })
}

fn field<T: std::str::FromStr>(line: usize, fields: &[String], i: usize, what: &str) -> Result<T> {
    let raw = fields
        .get(i)
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{raw}`")))
}

fn flag(line: usize, fields: &[String], i: usize, what: &str) -> Result<bool> {
    match field::<u8>(line, fields, i, what)? {
        0 => Ok(false),
        1 => Ok(true),
        x => Err(parse_err(line, format!("{what} must be 0 or 1, got {x}"))),
    }
}

struct RawGraph {
    n: usize,
    directed: bool,
    weighted: bool,
    edges: Vec<(usize, Edge)>,
}

fn read_raw<R: BufRead>(r: R) -> Result<RawGraph> {
    let mut rec = records(r);
    let (hl, header) = rec
        .next()
        .ok_or_else(|| parse_err(1, "empty graph file"))??;
    if header.len() != 4 {
        return Err(parse_err(hl, "header must be `n m directed weighted`"));
    }
    let n: usize = field(hl, &header, 0, "n")?;
    let m: usize = field(hl, &header, 1, "m")?;
    let directed = flag(hl, &header, 2, "directed flag")?;
    let weighted = flag(hl, &header, 3, "weighted flag")?;
    let mut edges = Vec::with_capacity(m);
    for item in rec {
        let (line, f) = item?;
        let arity = if weighted { 3 } else { 2 };
        if f.len() != arity && !(f.len() == 3 && !weighted) {
            return Err(parse_err(line, format!("expected {arity} fields")));
        }
        let u = field(line, &f, 0, "endpoint")?;
        let v = field(line, &f, 1, "endpoint")?;
        let w = if f.len() == 3 {
            field(line, &f, 2, "weight")?
        } else {
            1
        };
        if !weighted && w != 1 {
            return Err(parse_err(line, "unweighted graph with weight other than 1"));
        }
        edges.push((line, Edge::new(u, v, w)));
    }
    if edges.len() != m {
        return Err(parse_err(
            hl,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Ok(RawGraph {
        n,
        directed,
        weighted,
        edges,
    })
}

pub fn read_graph<R: BufRead>(r: R) -> Result<Graph> {
    let raw = read_raw(r)?;
    Graph::new(
        raw.n,
        raw.directed,
        raw.weighted,
        raw.edges.into_iter().map(|(_, e)| e).collect(),
    )
}

fn write_edges<'a, W: Write>(
    mut w: W,
    g: &Graph,
    edges: impl ExactSizeIterator<Item = &'a Edge>,
) -> Result<()> {
    writeln!(
        w,
        "{} {} {} {}",
        g.node_count(),
        edges.len(),
        u8::from(g.is_directed()),
        u8::from(g.is_weighted())
    )?;
    for e in edges {
        if g.is_weighted() {
            writeln!(w, "{} {} {}", e.u, e.v, e.weight)?;
        } else {
            writeln!(w, "{} {}", e.u, e.v)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_graph<W: Write>(w: W, g: &Graph) -> Result<()> {
    write_edges(w, g, g.edges().iter())
}

/// Writes the kept edges of `h` in increasing edge id order.
pub fn write_subgraph<W: Write>(w: W, g: &Graph, h: &Subgraph) -> Result<()> {
    let kept: Vec<&Edge> = h.edge_ids().map(|e| g.edge(e)).collect();
    write_edges(w, g, kept.into_iter())
}

/// Reads a subgraph file and maps each edge to its id in `g`.
pub fn read_subgraph<R: BufRead>(r: R, g: &Graph) -> Result<Subgraph> {
    let raw = read_raw(r)?;
    if raw.n != g.node_count() || raw.directed != g.is_directed() {
        return Err(Error::Input(
            "subgraph header does not match the graph".into(),
        ));
    }
    let mut h = Subgraph::empty(g);
    for (line, e) in raw.edges {
        let id = g
            .find_edge(e.u, e.v)
            .ok_or_else(|| parse_err(line, format!("edge ({}, {}) not in the graph", e.u, e.v)))?;
        if raw.weighted && g.edge(id).weight != e.weight {
            return Err(parse_err(line, "weight differs from the graph"));
        }
        h.insert(id);
    }
    Ok(h)
}

pub fn read_pairs<R: BufRead>(r: R) -> Result<Vec<(NodeId, NodeId)>> {
    records(r)
        .map(|item| {
            let (line, f) = item?;
            if f.len() != 2 {
                return Err(parse_err(line, "expected `s t`"));
            }
            Ok((field(line, &f, 0, "source")?, field(line, &f, 1, "target")?))
        })
        .collect()
}

pub fn write_pairs<W: Write>(mut w: W, pairs: &[(NodeId, NodeId)]) -> Result<()> {
    for (s, t) in pairs {
        writeln!(w, "{s} {t}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_graph(path: impl AsRef<FsPath>) -> Result<Graph> {
    read_graph(BufReader::new(File::open(path)?))
}

pub fn load_pairs(path: impl AsRef<FsPath>) -> Result<Vec<(NodeId, NodeId)>> {
    read_pairs(BufReader::new(File::open(path)?))
}

pub fn load_subgraph(path: impl AsRef<FsPath>, g: &Graph) -> Result<Subgraph> {
    read_subgraph(BufReader::new(File::open(path)?), g)
}

pub fn create(path: impl AsRef<FsPath>) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}
