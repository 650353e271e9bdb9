//! Shortcut partitions: every column of a gridtree hierarchy is cut into
//! clusters along its spine, so that shortest paths cross few clusters.

use crate::embedding::PlanarEmbedding;
use crate::error::{Error, Result};
use crate::graph::{components, mask, WeightedGraph};
use crate::gridtree::Hierarchy;
use crate::sssp::{dijkstra, multi_source, path_length, TOL};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Hierarchy node and column a cluster was cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnRef {
    pub node: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: usize,
    pub column: Option<ColumnRef>,
    /// Position of the cluster along its column's spine.
    pub ordinal: usize,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub eps: f64,
    pub t: f64,
    pub delta: f64,
    pub cluster_of: Vec<usize>,
    pub clusters: Vec<Cluster>,
}

impl Partition {
    pub fn from_clusters(n: usize, eps: f64, t: f64, delta: f64, clusters: Vec<Cluster>) -> Result<Self> {
        let mut cluster_of = vec![usize::MAX; n];
        for (i, c) in clusters.iter().enumerate() {
            for &v in &c.vertices {
                if cluster_of[v] != usize::MAX {
                    return Err(Error::Invariant(format!("vertex {v} lies in two clusters")));
                }
                cluster_of[v] = i;
            }
        }
        if let Some(v) = cluster_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Invariant(format!("vertex {v} lies in no cluster")));
        }
        Ok(Self { eps, t, delta, cluster_of, clusters })
    }

    /// Sorted, deduplicated adjacency between clusters.
    pub fn cluster_graph(&self, g: &WeightedGraph) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.clusters.len()];
        for e in g.edges() {
            let (a, b) = (self.cluster_of[e.u], self.cluster_of[e.v]);
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }
}

/// Cuts one column into clusters. Centers are placed along the spine at
/// arc-length steps of at least `eps * delta`; spine vertices join the
/// nearest center and the other column vertices join the cluster of their
/// closest spine vertex inside the column.
pub fn cluster_column(
    g: &WeightedGraph,
    spine: &[usize],
    column: &[usize],
    step: f64,
    tol: f64,
) -> Result<Vec<(usize, Vec<usize>)>> {
    let mut pos = vec![0.0];
    for p in spine.windows(2) {
        let w = g
            .weight(p[0], p[1])
            .ok_or_else(|| Error::Invariant("spine is not a path".into()))?;
        pos.push(pos.last().unwrap() + w);
    }
    let mut centers = vec![0];
    let mut j = 0;
    while let Some(k) = (j + 1..spine.len()).find(|&k| pos[k] - pos[j] >= step - tol) {
        centers.push(k);
        j = k;
    }
    let mut owner = vec![0; spine.len()];
    for (i, o) in owner.iter_mut().enumerate() {
        let mut best = (f64::INFINITY, 0);
        for (ci, &c) in centers.iter().enumerate() {
            let d = (pos[i] - pos[c]).abs();
            if d < best.0 {
                best = (d, ci);
            }
        }
        *o = best.1;
    }
    let scope = mask(g.n(), column);
    let sources: Vec<(usize, usize)> = spine.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let t = multi_source(g, &sources, Some(&scope), None);
    let mut out: Vec<(usize, Vec<usize>)> = centers.iter().map(|&c| (spine[c], Vec::new())).collect();
    for &v in column {
        if !t.reached(v) {
            return Err(Error::Invariant(format!("column vertex {v} cannot reach the spine")));
        }
        out[owner[t.label[v]]].1.push(v);
    }
    Ok(out)
}

/// Gridtree hierarchy plus the partition cut from it.
#[derive(Debug, Clone)]
pub struct ShortcutPartition {
    pub hierarchy: Hierarchy,
    pub partition: Partition,
}

/// Builds the hierarchy with column width `t * eps * delta` and clusters
/// every column.
///
/// # Example
///
/// ```
/// use treecover::generate::{grid, Weights};
/// use treecover::partition::build_partition;
/// use treecover::sssp::diameter;
/// let inst = grid(6, 6, Weights::Unit, 0).unwrap();
/// let delta = diameter(&inst.graph, true);
/// let sp = build_partition(&inst.graph, &inst.embedding, 0.5, 0.125, delta).unwrap();
/// assert_eq!(sp.partition.cluster_of.len(), 36);
/// ```
pub fn build_partition(
    g: &WeightedGraph,
    emb: &PlanarEmbedding,
    eps: f64,
    t: f64,
    delta: f64,
) -> Result<ShortcutPartition> {
    if !(eps > 0.0 && eps < 1.0) || !(t > 0.0 && t <= 0.5) {
        return Err(Error::InvalidInput(format!("need 0 < eps < 1 and 0 < t <= 1/2, got {eps}, {t}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidInput("diameter must be positive".into()));
    }
    let hierarchy = Hierarchy::build(g, emb, t * eps * delta, delta)?;
    let partition = cluster_hierarchy(g, &hierarchy, eps, t)?;
    Ok(ShortcutPartition { hierarchy, partition })
}

pub fn cluster_hierarchy(g: &WeightedGraph, h: &Hierarchy, eps: f64, t: f64) -> Result<Partition> {
    let tol = TOL * h.delta.max(1.0);
    let mut clusters = Vec::new();
    for (ni, node) in h.nodes.iter().enumerate() {
        for (ci, col) in node.gridtree.columns.iter().enumerate() {
            let parts = cluster_column(g, &col.spine, &col.vertices, eps * h.delta, tol)?;
            for (ordinal, (center, mut vertices)) in parts.into_iter().enumerate() {
                vertices.sort_unstable();
                clusters.push(Cluster {
                    center,
                    column: Some(ColumnRef { node: ni, column: ci }),
                    ordinal,
                    vertices,
                });
            }
        }
    }
    Partition::from_clusters(g.n(), eps, t, h.delta, clusters)
}

/// Hop count of a path: BFS distance in the cluster graph restricted to the
/// clusters the path touches.
pub fn cost(p: &Partition, cg: &[Vec<usize>], path: &[usize]) -> usize {
    let mut allowed: Vec<usize> = path.iter().map(|&v| p.cluster_of[v]).collect();
    allowed.sort_unstable();
    allowed.dedup();
    let src = p.cluster_of[path[0]];
    let dst = p.cluster_of[*path.last().unwrap()];
    if src == dst {
        return 0;
    }
    let idx = |c: usize| allowed.binary_search(&c).ok();
    let mut dist = vec![usize::MAX; allowed.len()];
    dist[idx(src).unwrap()] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(c) = q.pop_front() {
        let d = dist[idx(c).unwrap()];
        for &x in &cg[c] {
            if let Some(i) = idx(x) {
                if dist[i] == usize::MAX {
                    dist[i] = d + 1;
                    if x == dst {
                        return d + 1;
                    }
                    q.push_back(x);
                }
            }
        }
    }
    // consecutive path vertices always share or join clusters
    unreachable!("path clusters are connected")
}

/// Certified hop counts for a shortcut partition.
pub struct CostEngine<'a> {
    g: &'a WeightedGraph,
    p: &'a Partition,
    h: &'a Hierarchy,
    cg: Vec<Vec<usize>>,
}

impl<'a> CostEngine<'a> {
    pub fn new(g: &'a WeightedGraph, h: &'a Hierarchy, p: &'a Partition) -> Self {
        Self { g, p, h, cg: p.cluster_graph(g) }
    }

    pub fn cluster_graph(&self) -> &[Vec<usize>] {
        &self.cg
    }

    fn column_of(&self, v: usize) -> Option<ColumnRef> {
        self.p.clusters[self.p.cluster_of[v]].column
    }

    /// Walk from `u` to `v` through their shared column: into the spine
    /// inside `u`'s cluster, along the spine, and out inside `v`'s cluster.
    fn detour(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let cr = self.column_of(u)?;
        if self.column_of(v) != Some(cr) {
            return None;
        }
        let col = &self.h.nodes[cr.node].gridtree.columns[cr.column];
        let to_spine = |x: usize| -> Option<(usize, Vec<usize>)> {
            let cl = &self.p.clusters[self.p.cluster_of[x]];
            let scope = mask(self.g.n(), &cl.vertices);
            let sources: Vec<(usize, usize)> = col
                .spine
                .iter()
                .enumerate()
                .filter(|(_, &s)| scope[s])
                .map(|(i, &s)| (s, i))
                .collect();
            let t = multi_source(self.g, &sources, Some(&scope), None);
            t.reached(x).then(|| (t.label[x], t.path_to(x)))
        };
        let (iu, mut pu) = to_spine(u)?;
        let (iv, pv) = to_spine(v)?;
        pu.reverse();
        let seg: Vec<usize> = if iu <= iv {
            col.spine[iu..=iv].to_vec()
        } else {
            col.spine[iv..=iu].iter().rev().copied().collect()
        };
        let mut walk = pu;
        walk.extend_from_slice(&seg[1..]);
        walk.extend_from_slice(&pv[1..]);
        Some(walk)
    }

    /// Minimum hop count over a candidate set of `(1 + 8t)`-approximate
    /// paths: the shortest path itself, the spine detour, and the shortest
    /// path with each same-column run replaced by its detour. `path` must
    /// be a shortest `u`-`v` path of length `d`.
    pub fn cost_with_distortion(&self, path: &[usize], d: f64) -> usize {
        let limit = (1.0 + 8.0 * self.p.t) * d + TOL * self.p.delta.max(1.0);
        let mut best = cost(self.p, &self.cg, path);
        if best <= 1 {
            return best;
        }
        let (u, v) = (path[0], *path.last().unwrap());
        let mut consider = |walk: Vec<usize>| {
            if let Some(len) = path_length(self.g, &walk) {
                if len <= limit {
                    best = best.min(cost(self.p, &self.cg, &walk));
                }
            }
        };
        if let Some(w) = self.detour(u, v) {
            consider(w);
        }
        let mut chopped = vec![path[0]];
        let mut i = 0;
        let mut changed = false;
        while i < path.len() {
            let c = self.column_of(path[i]);
            let mut j = i;
            while j + 1 < path.len() && self.column_of(path[j + 1]) == c {
                j += 1;
            }
            let swap = j > i && self.p.cluster_of[path[i]] != self.p.cluster_of[path[j]];
            match self.detour(path[i], path[j]).filter(|_| swap) {
                Some(w) => {
                    chopped.extend_from_slice(&w[1..]);
                    changed = true;
                }
                None => chopped.extend_from_slice(&path[i + 1..=j]),
            }
            if j + 1 < path.len() {
                chopped.push(path[j + 1]);
            }
            i = j + 1;
        }
        if changed {
            consider(chopped);
        }
        best
    }
}

/// Measurements of a verified partition.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartitionReport {
    pub clusters: usize,
    pub max_diameter: f64,
    pub diameter_bound: f64,
    pub min_spacing_slack: f64,
    pub pairs: usize,
    pub max_cost: usize,
    pub max_cost_ratio: f64,
}

/// Hop bound for a pair at distance `d`.
pub fn hop_bound(d: f64, eps: f64, t: f64, delta: f64) -> f64 {
    85.0 * d / (t * eps * delta) + 80.0
}

/// Checks connectivity and strong diameter of clusters, spacing of centers
/// along each column, and the hop bound on all pairs (`n <= 1500`) or on
/// `sample` seeded random pairs.
pub fn verify_partition(
    g: &WeightedGraph,
    h: &Hierarchy,
    p: &Partition,
    sample: usize,
    seed: u64,
) -> Result<PartitionReport> {
    let n = g.n();
    let delta = p.delta;
    let tol = TOL * delta.max(1.0);
    let mut rep = PartitionReport {
        clusters: p.clusters.len(),
        diameter_bound: 4.0 * p.eps * delta,
        min_spacing_slack: f64::INFINITY,
        ..Default::default()
    };
    let diams: Vec<Result<f64>> = p
        .clusters
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let scope = mask(n, &c.vertices);
            if components(g, Some(&scope)).len() != 1 {
                return Err(Error::Invariant(format!("cluster {i} is disconnected")));
            }
            Ok(c.vertices
                .iter()
                .map(|&v| {
                    let t = dijkstra(g, v, Some(&scope), None);
                    c.vertices.iter().map(|&x| t.dist[x]).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max))
        })
        .collect();
    for (i, d) in diams.into_iter().enumerate() {
        let d = d?;
        rep.max_diameter = rep.max_diameter.max(d);
        if d > rep.diameter_bound + tol {
            return Err(Error::Invariant(format!("cluster {i} has strong diameter {d} > {}", rep.diameter_bound)));
        }
    }
    let mut by_column: std::collections::BTreeMap<(usize, usize), Vec<(usize, usize)>> = Default::default();
    for c in &p.clusters {
        if let Some(cr) = c.column {
            by_column.entry((cr.node, cr.column)).or_default().push((c.ordinal, c.center));
        }
    }
    for ((node, col), mut centers) in by_column {
        centers.sort_unstable();
        let sub = h.nodes[node].gridtree.sub_mask(n, col);
        for (i, &(oi, ci)) in centers.iter().enumerate() {
            let t = dijkstra(g, ci, Some(&sub), None);
            for &(oj, cj) in &centers[i + 1..] {
                let need = (oj - oi) as f64 * p.eps * delta;
                rep.min_spacing_slack = rep.min_spacing_slack.min(t.dist[cj] - need);
                if t.dist[cj] < need - tol {
                    return Err(Error::Invariant(format!(
                        "centers {oi} and {oj} of column ({node}, {col}) are {} apart, need {need}",
                        t.dist[cj]
                    )));
                }
            }
        }
    }
    let engine = CostEngine::new(g, h, p);
    let pairs: Vec<(usize, usize)> = if n <= 1500 {
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
    } else {
        let mut rng = crate::generate::rng(seed);
        (0..sample)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                (u, v)
            })
            .filter(|(u, v)| u != v)
            .collect()
    };
    let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &pairs {
        by_src[u].push(v);
    }
    let results: Vec<Result<(usize, f64)>> = by_src
        .par_iter()
        .enumerate()
        .filter(|(_, vs)| !vs.is_empty())
        .map(|(u, vs)| {
            let t = dijkstra(g, u, None, None);
            let mut worst = (0usize, 0.0f64);
            for &v in vs {
                let path = t.path_to(v);
                let c = engine.cost_with_distortion(&path, t.dist[v]);
                let bound = hop_bound(t.dist[v], p.eps, p.t, delta);
                if c as f64 > bound {
                    return Err(Error::Invariant(format!("pair ({u}, {v}) needs {c} hops, bound {bound}")));
                }
                worst.0 = worst.0.max(c);
                worst.1 = worst.1.max(c as f64 / bound);
            }
            Ok(worst)
        })
        .collect();
    for r in results {
        let (c, ratio) = r?;
        rep.max_cost = rep.max_cost.max(c);
        rep.max_cost_ratio = rep.max_cost_ratio.max(ratio);
    }
    rep.pairs = pairs.len();
    Ok(rep)
}
