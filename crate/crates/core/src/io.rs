//! Plain-text graph format and PACE `.td` decompositions.
//!
//! Graph files:
//!
//! ```text
//! p <n> <m>
//! e <u> <v> <w>          (m lines, edge i is the i-th `e` line)
//! r <v> <e1> <e2> ...    (optional rotation, edge indices in cyclic order)
//! outer <d1> <d2> ...    (optional outer face, dart 2e is u->v, 2e+1 is v->u)
//! ```
//!
//! Lines starting with `c` are comments. Vertex ids are 0-based.
//!
//! Hierarchies, partitions and covers are stored as pretty-printed JSON.

use crate::decomposition::TreeDecomposition;
use crate::embedding::PlanarEmbedding;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::Write;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {what}")))
}

/// Parses a graph and its optional embedding.
pub fn read_graph(text: &str) -> Result<(WeightedGraph, Option<PlanarEmbedding>)> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut rotation: Option<Vec<Vec<usize>>> = None;
    let mut outer = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let mut t = raw.split_whitespace();
        let Some(tag) = t.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(perr(ln, "duplicate header"));
                }
                header = Some((num(t.next(), ln, "n")?, num(t.next(), ln, "m")?));
            }
            "e" => {
                if header.is_none() {
                    return Err(perr(ln, "edge before header"));
                }
                edges.push((num(t.next(), ln, "u")?, num(t.next(), ln, "v")?, num(t.next(), ln, "w")?));
            }
            "r" => {
                let (n, _) = header.ok_or_else(|| perr(ln, "rotation before header"))?;
                let v: usize = num(t.next(), ln, "vertex")?;
                if v >= n {
                    return Err(perr(ln, "rotation vertex out of range"));
                }
                let rot = rotation.get_or_insert_with(|| vec![Vec::new(); n]);
                rot[v] = t.map(|x| x.parse().map_err(|_| perr(ln, "bad edge index"))).collect::<Result<_>>()?;
                continue;
            }
            "outer" => {
                outer = Some(t.map(|x| x.parse().map_err(|_| perr(ln, "bad dart"))).collect::<Result<Vec<usize>>>()?);
                continue;
            }
            other => return Err(perr(ln, format!("unknown line tag `{other}`"))),
        }
        if t.next().is_some() {
            return Err(perr(ln, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| perr(0, "missing header"))?;
    if edges.len() != m {
        return Err(perr(0, format!("header announces {m} edges, found {}", edges.len())));
    }
    let g = WeightedGraph::new(n, edges)?;
    let emb = match (rotation, outer) {
        (Some(r), Some(o)) => Some(PlanarEmbedding::new(&g, r, o)?),
        (None, None) => None,
        _ => return Err(perr(0, "rotation and outer face must be given together")),
    };
    Ok((g, emb))
}

pub fn write_graph(g: &WeightedGraph, emb: Option<&PlanarEmbedding>) -> String {
    let mut s = String::new();
    writeln!(s, "p {} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        writeln!(s, "e {} {} {}", e.u, e.v, e.w).unwrap();
    }
    if let Some(emb) = emb {
        for (v, rot) in emb.rotation.iter().enumerate() {
            write!(s, "r {v}").unwrap();
            for e in rot {
                write!(s, " {e}").unwrap();
            }
            s.push('\n');
        }
        s.push_str("outer");
        for d in &emb.outer {
            write!(s, " {d}").unwrap();
        }
        s.push('\n');
    }
    s
}

/// Parses a PACE `.td` file. Bags and vertices are 1-based on disk.
pub fn read_td(text: &str) -> Result<TreeDecomposition> {
    let mut bags: Option<Vec<Vec<usize>>> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let mut t = raw.split_whitespace();
        let Some(tag) = t.next() else { continue };
        match tag {
            "c" => {}
            "s" => {
                if t.next() != Some("td") {
                    return Err(perr(ln, "expected `s td`"));
                }
                let nb: usize = num(t.next(), ln, "bag count")?;
                bags = Some(vec![Vec::new(); nb]);
            }
            "b" => {
                let bs = bags.as_mut().ok_or_else(|| perr(ln, "bag before header"))?;
                let id: usize = num(t.next(), ln, "bag id")?;
                if id == 0 || id > bs.len() {
                    return Err(perr(ln, "bag id out of range"));
                }
                let mut vs = Vec::new();
                for x in t {
                    let v: usize = x.parse().map_err(|_| perr(ln, "bad vertex"))?;
                    if v == 0 {
                        return Err(perr(ln, "vertices are 1-based"));
                    }
                    vs.push(v - 1);
                }
                bs[id - 1] = vs;
            }
            _ => {
                let a: usize = tag.parse().map_err(|_| perr(ln, "bad tree edge"))?;
                let b: usize = num(t.next(), ln, "tree edge")?;
                if a == 0 || b == 0 {
                    return Err(perr(ln, "bags are 1-based"));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    Ok(TreeDecomposition { bags: bags.ok_or_else(|| perr(0, "missing `s td` header"))?, edges })
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut s = String::new();
    writeln!(s, "s td {} {} {}", td.bags.len(), td.width() + 1, n).unwrap();
    for (i, b) in td.bags.iter().enumerate() {
        write!(s, "b {}", i + 1).unwrap();
        for v in b {
            write!(s, " {}", v + 1).unwrap();
        }
        s.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(s, "{} {}", a + 1, b + 1).unwrap();
    }
    s
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| perr(e.line(), e.to_string()))
}
