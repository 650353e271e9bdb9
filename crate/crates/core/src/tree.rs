//! Rooted weighted trees and constant-time LCA distance queries.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeKind {
    /// Every edge is an edge of the input graph with its weight.
    Spanning,
    /// Edges are metric shortcuts, possibly through extra vertices.
    Steiner,
}

/// Tree stored top-down: node 0 is the root and every parent precedes its
/// children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootedTree {
    pub kind: TreeKind,
    pub vertices: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    pub weight: Vec<f64>,
}

impl RootedTree {
    pub fn singleton(kind: TreeKind, v: usize) -> Self {
        Self { kind, vertices: vec![v], parent: vec![None], weight: vec![0.0] }
    }

    /// Builds a tree from `(vertex, parent vertex, edge weight)` triples
    /// given in any order.
    pub fn from_edges(kind: TreeKind, root: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut kids: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
        for &(v, p, w) in edges {
            kids.entry(p).or_default().push((v, w));
        }
        let mut t = Self::singleton(kind, root);
        let mut seen: HashSet<usize> = HashSet::from([root]);
        let mut i = 0;
        while i < t.vertices.len() {
            let x = t.vertices[i];
            if let Some(mut ks) = kids.remove(&x) {
                ks.sort_by_key(|k| k.0);
                for (v, w) in ks {
                    if !seen.insert(v) {
                        return Err(Error::Invariant(format!("vertex {v} appears twice in tree edges")));
                    }
                    t.vertices.push(v);
                    t.parent.push(Some(i));
                    t.weight.push(w);
                }
            }
            i += 1;
        }
        if t.vertices.len() != edges.len() + 1 {
            return Err(Error::Invariant("tree edges do not hang off the root".into()));
        }
        Ok(t)
    }

    pub fn root(&self) -> usize {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Weighted distance of every node from the root, by node index.
    pub fn root_distances(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.len()];
        for i in 1..self.len() {
            d[i] = d[self.parent[i].unwrap()] + self.weight[i];
        }
        d
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (1..self.len()).map(move |i| (self.vertices[self.parent[i].unwrap()], self.vertices[i], self.weight[i]))
    }

    /// Same tree hung from `v`.
    pub fn rerooted(&self, v: usize) -> Result<Self> {
        let edges: Vec<(usize, usize, f64)> = self.edges().collect();
        let mut adj: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
        for &(a, b, w) in &edges {
            adj.entry(a).or_default().push((b, w));
            adj.entry(b).or_default().push((a, w));
        }
        if !self.vertices.contains(&v) {
            return Err(Error::InvalidInput(format!("vertex {v} is not in the tree")));
        }
        let mut out = Vec::with_capacity(edges.len());
        let mut stack = vec![(v, usize::MAX)];
        while let Some((x, from)) = stack.pop() {
            for &(y, w) in adj.get(&x).map(|l| l.as_slice()).unwrap_or(&[]) {
                if y != from {
                    if out.len() == edges.len() {
                        return Err(Error::Invariant("tree edges contain a cycle".into()));
                    }
                    out.push((y, x, w));
                    stack.push((y, x));
                }
            }
        }
        Self::from_edges(self.kind, v, &out)
    }
}

/// Euler tour with a sparse table over depths.
#[derive(Debug, Clone)]
pub struct LcaIndex {
    local: HashMap<usize, usize>,
    first: Vec<usize>,
    dist: Vec<f64>,
    euler: Vec<usize>,
    depth: Vec<usize>,
    table: Vec<Vec<usize>>,
}

impl LcaIndex {
    pub fn new(t: &RootedTree) -> Self {
        let n = t.len();
        let mut kids = vec![Vec::new(); n];
        for i in 1..n {
            kids[t.parent[i].unwrap()].push(i);
        }
        let mut depth = vec![0; n];
        for i in 1..n {
            depth[i] = depth[t.parent[i].unwrap()] + 1;
        }
        let mut euler = Vec::with_capacity(2 * n);
        let mut first = vec![0; n];
        let mut stack = vec![(0usize, 0usize)];
        while let Some((x, k)) = stack.pop() {
            if k == 0 {
                first[x] = euler.len();
            }
            euler.push(x);
            if k < kids[x].len() {
                stack.push((x, k + 1));
                stack.push((kids[x][k], 0));
            }
        }
        let m = euler.len();
        let mut table = vec![euler.clone()];
        let mut len = 1;
        while 2 * len <= m {
            let prev = table.last().unwrap();
            let row: Vec<usize> = (0..=m - 2 * len)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + len]);
                    if depth[a] <= depth[b] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            table.push(row);
            len *= 2;
        }
        let local = t.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Self { local, first, dist: t.root_distances(), euler, depth, table }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.local.contains_key(&v)
    }

    pub fn local(&self, v: usize) -> Option<usize> {
        self.local.get(&v).copied()
    }

    /// Node index of the lowest common ancestor of node indices `a` and `b`.
    pub fn lca(&self, a: usize, b: usize) -> usize {
        let (mut l, mut r) = (self.first[a], self.first[b]);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let k = usize::BITS as usize - 1 - (r - l + 1).leading_zeros() as usize;
        let (x, y) = (self.table[k][l], self.table[k][r + 1 - (1 << k)]);
        if self.depth[x] <= self.depth[y] {
            x
        } else {
            y
        }
    }

    /// Tree distance between vertices, `None` if either is absent.
    pub fn distance(&self, u: usize, v: usize) -> Option<f64> {
        let (a, b) = (self.local(u)?, self.local(v)?);
        let c = self.lca(a, b);
        Some(self.dist[a] + self.dist[b] - 2.0 * self.dist[c])
    }

    pub fn root_distance(&self, v: usize) -> Option<f64> {
        self.local(v).map(|a| self.dist[a])
    }

    pub fn euler_len(&self) -> usize {
        self.euler.len()
    }
}

/// LCA indexes for a family of trees plus per-vertex membership lists.
#[derive(Debug, Clone)]
pub struct TreeSetIndex {
    pub lca: Vec<LcaIndex>,
    member: Vec<Vec<(usize, usize)>>,
}

impl TreeSetIndex {
    /// Indexes `trees`; membership is tracked for vertices `0..n` only.
    pub fn new<'a>(n: usize, trees: impl IntoIterator<Item = &'a RootedTree>) -> Self {
        let mut member = vec![Vec::new(); n];
        let mut lca = Vec::new();
        for (ti, t) in trees.into_iter().enumerate() {
            for (i, &v) in t.vertices.iter().enumerate() {
                if v < n {
                    member[v].push((ti, i));
                }
            }
            lca.push(LcaIndex::new(t));
        }
        Self { lca, member }
    }

    pub fn trees_of(&self, v: usize) -> &[(usize, usize)] {
        &self.member[v]
    }

    /// Minimum tree distance over trees holding both vertices, with the
    /// number of LCA lookups spent.
    pub fn min_distance(&self, u: usize, v: usize) -> (f64, usize) {
        let (a, b) = (&self.member[u], &self.member[v]);
        let (mut i, mut j) = (0, 0);
        let mut best = f64::INFINITY;
        let mut lookups = 0;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let t = &self.lca[a[i].0];
                    let c = t.lca(a[i].1, b[j].1);
                    lookups += 1;
                    best = best.min(t.dist[a[i].1] + t.dist[b[j].1] - 2.0 * t.dist[c]);
                    i += 1;
                    j += 1;
                }
            }
        }
        (best, lookups)
    }

    /// Minimum of `d(u, root) + d(root, v)` over trees holding both.
    pub fn min_root_path(&self, u: usize, v: usize) -> f64 {
        let (a, b) = (&self.member[u], &self.member[v]);
        let (mut i, mut j) = (0, 0);
        let mut best = f64::INFINITY;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let t = &self.lca[a[i].0];
                    best = best.min(t.dist[a[i].1] + t.dist[b[j].1]);
                    i += 1;
                    j += 1;
                }
            }
        }
        best
    }
}

/// Largest distance between two nodes of a tree.
pub fn tree_diameter(t: &RootedTree) -> f64 {
    let n = t.len();
    let mut adj = vec![Vec::new(); n];
    for i in 1..n {
        let p = t.parent[i].unwrap();
        adj[i].push((p, t.weight[i]));
        adj[p].push((i, t.weight[i]));
    }
    let sweep = |s: usize| {
        let mut d = vec![f64::NAN; n];
        d[s] = 0.0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(y, w) in &adj[x] {
                if d[y].is_nan() {
                    d[y] = d[x] + w;
                    stack.push(y);
                }
            }
        }
        let far = (0..n).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
        (far, d[far])
    };
    let (far, _) = sweep(0);
    sweep(far).1
}
