//! Plain-text formats.
//!
//! Graph: a header line `n m` followed by `m` lines `u v`.
//! Demands: one `s t D` per line, where `D` is an integer bound, `-` for an
//! exact-distance pair or `*` for a connectivity-only pair.
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fmt::Write;

use super::{Bound, Demand, DemandSet, EdgeSet, Graph};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn fields<const N: usize>(line: usize, text: &str) -> Result<[&str; N]> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| Error::Parse { line, msg: format!("expected {N} fields, found {}", p.len()) })
}

fn number(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse { line, msg: format!("not a non-negative integer: {s:?}") })
}

fn lift(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse { line, msg: other.to_string() },
    }
}

/// Headerless `u v` lines with their line numbers.
pub(crate) fn parse_pairs(text: &str) -> Result<Vec<(usize, usize, usize)>> {
    content_lines(text)
        .map(|(ln, l)| {
            let [u, v] = fields::<2>(ln, l)?;
            Ok((ln, number(ln, u)?, number(ln, v)?))
        })
        .collect()
}

/// Header `n m` plus the raw edge lines, shared with the undirected format.
pub(crate) fn parse_header_and_pairs(text: &str) -> Result<(usize, Vec<(usize, usize, usize)>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let [n, m] = fields::<2>(hl, header)?;
    let (n, m) = (number(hl, n)?, number(hl, m)?);
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines {
        let [u, v] = fields::<2>(ln, l)?;
        edges.push((ln, number(ln, u)?, number(ln, v)?));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: hl, msg: format!("header promises {m} edges, found {}", edges.len()) });
    }
    Ok((n, edges))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let (n, edges) = parse_header_and_pairs(text)?;
    let mut seen = std::collections::HashSet::new();
    for &(ln, u, v) in &edges {
        if u >= n || v >= n {
            return Err(Error::Parse { line: ln, msg: format!("vertex out of range in edge ({u}, {v})") });
        }
        if u == v {
            return Err(Error::Parse { line: ln, msg: format!("self-loop on {u}") });
        }
        if !seen.insert((u, v)) {
            return Err(Error::Parse { line: ln, msg: format!("duplicate edge ({u}, {v})") });
        }
    }
    Graph::new(n, edges.into_iter().map(|(_, u, v)| (u, v)))
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_demands(text: &str) -> Result<DemandSet> {
    let mut pairs = Vec::new();
    let mut lines = Vec::new();
    for (ln, l) in content_lines(text) {
        let [s, t, d] = fields::<3>(ln, l)?;
        let bound = match d {
            "-" => Bound::Exact,
            "*" => Bound::Unbounded,
            other => Bound::AtMost(other.parse().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("bound must be an integer, '-' or '*', found {other:?}"),
            })?),
        };
        pairs.push(Demand::new(number(ln, s)?, number(ln, t)?, bound));
        lines.push(ln);
    }
    // report the offending line rather than a bare validation error
    for i in 0..pairs.len() {
        DemandSet::new(pairs[..=i].iter().copied()).map_err(|e| lift(lines[i], e))?;
    }
    DemandSet::new(pairs)
}

pub fn format_demands(d: &DemandSet) -> String {
    let mut out = String::new();
    for p in d {
        let bound = match p.bound {
            Bound::Exact => "-".to_string(),
            Bound::Unbounded => "*".to_string(),
            Bound::AtMost(b) => b.to_string(),
        };
        writeln!(out, "{} {} {bound}", p.s, p.t).unwrap();
    }
    out
}

/// Solution files: one `u v` line per kept edge, each of which must exist in `g`.
pub fn parse_edge_list(text: &str, g: &Graph) -> Result<EdgeSet> {
    let mut ids = Vec::new();
    for (ln, u, v) in parse_pairs(text)? {
        let id =
            g.edge_id(u, v).ok_or_else(|| Error::Parse { line: ln, msg: format!("edge ({u}, {v}) not in graph") })?;
        ids.push(id);
    }
    Ok(EdgeSet::new(ids))
}
