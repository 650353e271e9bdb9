//! Weighted undirected graphs with dense vertex ids.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An undirected edge with a non-negative weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Connected, simple, undirected graph on vertices `0..n`.
///
/// Adjacency lists are sorted by neighbor id, so iteration order is
/// deterministic everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct WeightedGraph {
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<Edge>,
}

impl From<WeightedGraph> for GraphRepr {
    fn from(g: WeightedGraph) -> Self {
        Self { n: g.n(), edges: g.edges }
    }
}

impl TryFrom<GraphRepr> for WeightedGraph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Self::new(r.n, r.edges.into_iter().map(|e| (e.u, e.v, e.w)).collect())
    }
}

impl WeightedGraph {
    /// Builds a graph and rejects self-loops, parallel edges, bad weights
    /// and disconnected inputs.
    ///
    /// # Example
    ///
    /// ```
    /// use treecover::WeightedGraph;
    /// let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 2.5)]).unwrap();
    /// assert_eq!(g.weight(1, 2), Some(2.5));
    /// assert!(WeightedGraph::new(3, vec![(0, 1, 1.0)]).is_err());
    /// ```
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let g = Self::new_unchecked(n, edges)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Same as [`WeightedGraph::new`] without the connectivity check.
    pub fn new_unchecked(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(edges.len());
        for (i, &(u, v, w)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge {i} has endpoint out of range")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidInput(format!("edge {i} has invalid weight {w}")));
            }
            adj[u].push((v, i));
            adj[v].push((u, i));
            out.push(Edge { u, v, w });
        }
        for (x, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|p| p[0].0 == p[1].0) {
                return Err(Error::InvalidInput(format!("parallel edges at vertex {x}")));
            }
        }
        Ok(Self { edges: out, adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    /// `(neighbor, edge index)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |p| p.0).ok().map(|i| list[i].1)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.edge_index(u, v).map(|e| self.edges[e].w)
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    pub fn is_connected(&self) -> bool {
        components(self, None).len() <= 1
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }
}

/// Connected components of the subgraph induced by `scope` (all vertices if
/// `None`). Each component is sorted; components are ordered by smallest id.
pub fn components(g: &WeightedGraph, scope: Option<&[bool]>) -> Vec<Vec<usize>> {
    let inside = |v: usize| scope.map_or(true, |s| s[v]);
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] || !inside(s) {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for &(y, _) in g.neighbors(x) {
                if !seen[y] && inside(y) {
                    seen[y] = true;
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Boolean membership mask over `0..n`.
pub fn mask(n: usize, verts: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in verts {
        m[v] = true;
    }
    m
}

/// Sorted vertex list of a mask.
pub fn members(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|p| *p.1).map(|p| p.0).collect()
}
