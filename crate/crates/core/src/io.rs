//! Edge-list and DIMACS readers and writers.
//!
//! Plain edge lists hold one `u v` pair per line (0-based, whitespace
//! separated, `#` starts a comment). DIMACS files carry a `p edge n m` header
//! and 1-based `e u v` lines; `c` lines are comments.

use std::fs;
use std::io::Write;
use std::path::Path as FsPath;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse_graph(text: &str) -> Result<Graph> {
    let is_dimacs = text
        .lines()
        .map(str::trim)
        .any(|l| l.starts_with("p ") || l == "p");
    if is_dimacs {
        parse_dimacs(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn read_graph(path: impl AsRef<FsPath>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: "expected two vertex ids".into(),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid vertex id {tok:?}"),
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let u = parse_id(toks.next(), i + 1)?;
        let v = parse_id(toks.next(), i + 1)?;
        if toks.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                message: "trailing tokens".into(),
            });
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Graph::from_edges(n, edges)
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {
                let _format = toks.next();
                n = Some(parse_id(toks.next(), lineno)?);
            }
            Some("e") => {
                let u = parse_id(toks.next(), lineno)?;
                let v = parse_id(toks.next(), lineno)?;
                if u == 0 || v == 0 {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "DIMACS vertex ids are 1-based".into(),
                    });
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("unknown DIMACS line type {other:?}"),
                })
            }
            None => {}
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        message: "missing `p` header".into(),
    })?;
    Graph::from_edges(n, edges)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# n={} m={}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn write_dimacs<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "p edge {} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}
