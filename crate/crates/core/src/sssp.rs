//! Dijkstra variants, diameter estimation and the exact all-pairs oracle.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Relative tolerance for distance comparisons, scaled by the diameter.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key {
    d: f64,
    label: usize,
    v: usize,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        // reversed for a min-heap
        o.d.total_cmp(&self.d)
            .then(o.label.cmp(&self.label))
            .then(o.v.cmp(&self.v))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Result of a (multi-source) Dijkstra run.
///
/// Unreached vertices have `dist = INFINITY`, no parent and label
/// `usize::MAX`.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    pub dist: Vec<f64>,
    pub parent: Vec<Option<usize>>,
    pub label: Vec<usize>,
}

impl ShortestPathTree {
    pub fn reached(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Tree path from the source that reached `v` down to `v`.
    pub fn path_to(&self, v: usize) -> Vec<usize> {
        let mut p = vec![v];
        let mut x = v;
        while let Some(y) = self.parent[x] {
            p.push(y);
            x = y;
        }
        p.reverse();
        p
    }

    /// Reached vertices in increasing id order.
    pub fn reached_vertices(&self) -> Vec<usize> {
        (0..self.dist.len()).filter(|&v| self.reached(v)).collect()
    }
}

/// Multi-source Dijkstra. Each source carries a label; vertices take the
/// label of the nearest source, ties broken by smaller label, and parents
/// tie-break toward the smaller vertex id. Labels are therefore constant along
/// tree paths. The search is confined to `scope` and stops beyond `radius`.
pub fn multi_source(
    g: &WeightedGraph,
    sources: &[(usize, usize)],
    scope: Option<&[bool]>,
    radius: Option<f64>,
) -> ShortestPathTree {
    let n = g.n();
    let inside = |v: usize| scope.map_or(true, |s| s[v]);
    let rad = radius.unwrap_or(f64::INFINITY);
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut label = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &(s, l) in sources {
        if !inside(s) {
            continue;
        }
        if dist[s] > 0.0 || l < label[s] {
            dist[s] = 0.0;
            label[s] = l;
            heap.push(Key { d: 0.0, label: l, v: s });
        }
    }
    while let Some(Key { d, label: l, v }) = heap.pop() {
        if done[v] || d != dist[v] || l != label[v] {
            continue;
        }
        done[v] = true;
        for &(y, e) in g.neighbors(v) {
            if done[y] || !inside(y) {
                continue;
            }
            let nd = d + g.edge(e).w;
            if nd > rad {
                continue;
            }
            let better = match nd.total_cmp(&dist[y]) {
                Ordering::Less => true,
                Ordering::Equal => l < label[y] || (l == label[y] && parent[y].map_or(true, |p| v < p)),
                Ordering::Greater => false,
            };
            if better {
                let relabel = nd != dist[y] || l != label[y];
                dist[y] = nd;
                label[y] = l;
                parent[y] = Some(v);
                if relabel {
                    heap.push(Key { d: nd, label: l, v: y });
                }
            }
        }
    }
    ShortestPathTree { dist, parent, label }
}

/// Single-source Dijkstra with optional scope and radius.
pub fn dijkstra(
    g: &WeightedGraph,
    source: usize,
    scope: Option<&[bool]>,
    radius: Option<f64>,
) -> ShortestPathTree {
    multi_source(g, &[(source, 0)], scope, radius)
}

/// Deterministic shortest path between `u` and `v` inside `scope`.
pub fn shortest_path(g: &WeightedGraph, u: usize, v: usize, scope: Option<&[bool]>) -> Option<Vec<usize>> {
    let t = dijkstra(g, u, scope, None);
    t.reached(v).then(|| t.path_to(v))
}

/// Length of a vertex path; `None` if some consecutive pair is not an edge.
pub fn path_length(g: &WeightedGraph, path: &[usize]) -> Option<f64> {
    path.windows(2).map(|p| g.weight(p[0], p[1])).sum()
}

/// Exact diameter (all sources) or a double-sweep lower estimate.
pub fn diameter(g: &WeightedGraph, exact: bool) -> f64 {
    if exact {
        (0..g.n())
            .into_par_iter()
            .map(|s| ecc(&dijkstra(g, s, None, None)).0)
            .reduce(|| 0.0, f64::max)
    } else {
        let (_, far) = ecc(&dijkstra(g, 0, None, None));
        ecc(&dijkstra(g, far, None, None)).0
    }
}

fn ecc(t: &ShortestPathTree) -> (f64, usize) {
    let mut best = (0.0, 0);
    for (v, &d) in t.dist.iter().enumerate() {
        if d.is_finite() && d > best.0 {
            best = (d, v);
        }
    }
    best
}

/// Default cap for the dense all-pairs oracle.
pub const ORACLE_CAP: usize = 5000;

/// Dense all-pairs distance table used as ground truth.
#[derive(Debug, Clone)]
pub struct ExactOracle {
    n: usize,
    d: Vec<f64>,
}

impl ExactOracle {
    pub fn new(g: &WeightedGraph) -> Result<Self> {
        Self::with_cap(g, ORACLE_CAP)
    }

    pub fn with_cap(g: &WeightedGraph, cap: usize) -> Result<Self> {
        let n = g.n();
        if n > cap {
            return Err(Error::CapExceeded(format!("exact oracle needs n <= {cap}, got {n}")));
        }
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|s| dijkstra(g, s, None, None).dist)
            .collect();
        Ok(Self { n, d: rows.concat() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}
