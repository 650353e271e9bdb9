//! Additive forest covers from shortcut partitions.
//!
//! Every cluster center grows a shortest-path tree inside the subgraph of its
//! column. Trees are grouped into forests by hierarchy layer, column level
//! modulo `ceil(6 delta / w)` for column width `w` and cluster ordinal modulo
//! `ceil(14/eps)`, which keeps the trees of one forest vertex-disjoint.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::gridtree::Hierarchy;
use crate::partition::Partition;
use crate::sssp::{dijkstra, ExactOracle, TOL};
use crate::tree::{tree_diameter, RootedTree, TreeKind, TreeSetIndex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Ball radius factor: trees reach `(GAMMA + 1) * delta` from their center.
pub const GAMMA: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<RootedTree>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestCover {
    pub eps: f64,
    pub delta: f64,
    /// Column width of the hierarchy the cover was built from.
    pub width: f64,
    /// Non-empty forests in key order.
    pub forests: Vec<Forest>,
    /// Number of `(layer, level group, index group)` slots.
    pub slots: usize,
}

impl ForestCover {
    pub fn tree_count(&self) -> usize {
        self.forests.iter().map(|f| f.trees.len()).sum()
    }

    pub fn additive_bound(&self) -> f64 {
        2.0 * GAMMA * self.eps * self.delta
    }
}

/// Level groups for columns of width `width` at scale `delta`. Levels in one
/// group are more than `(GAMMA + 1) * delta` apart.
pub fn level_groups(width: f64, delta: f64) -> usize {
    ((GAMMA + 2.0) * delta / width - 1e-9).ceil().max(1.0) as usize
}

pub fn index_groups(eps: f64) -> usize {
    ((3.0 * GAMMA + 2.0) / eps).ceil() as usize
}

/// Forest count bound for a hierarchy of the given column width.
pub fn forest_bound(eps: f64, width: f64, delta: f64) -> usize {
    ((8.0 / eps).ceil() as usize + 1) * level_groups(width, delta) * index_groups(eps)
}

/// Builds the forest cover of a shortcut partition.
pub fn cover_hierarchy(g: &WeightedGraph, h: &Hierarchy, p: &Partition) -> Result<ForestCover> {
    let n = g.n();
    let (lg, ig) = (level_groups(h.width, h.delta), index_groups(p.eps));
    let radius = (GAMMA + 1.0) * h.delta;
    let mut jobs: Vec<(usize, usize, usize)> = Vec::new();
    for (i, c) in p.clusters.iter().enumerate() {
        let cr = c.column.ok_or_else(|| Error::InvalidInput("cluster without a column".into()))?;
        jobs.push((cr.node, cr.column, i));
    }
    jobs.sort_unstable();
    let built: Vec<((usize, usize, usize), RootedTree)> = jobs
        .par_chunk_by(|a, b| (a.0, a.1) == (b.0, b.1))
        .flat_map_iter(|chunk| {
            let (node, col) = (chunk[0].0, chunk[0].1);
            let nd = &h.nodes[node];
            let level = nd.gridtree.columns[col].level;
            let scope = nd.gridtree.sub_mask(n, col);
            chunk
                .iter()
                .map(|&(_, _, ci)| {
                    let c = &p.clusters[ci];
                    let t = dijkstra(g, c.center, Some(&scope), Some(radius));
                    let edges: Vec<(usize, usize, f64)> = t
                        .reached_vertices()
                        .into_iter()
                        .filter_map(|v| t.parent[v].map(|u| (v, u, t.dist[v] - t.dist[u])))
                        .map(|(v, u, _)| (v, u, g.weight(u, v).unwrap()))
                        .collect();
                    let tree = RootedTree::from_edges(TreeKind::Spanning, c.center, &edges).expect("tree");
                    ((nd.layer, level % lg, c.ordinal % ig), tree)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut map: BTreeMap<(usize, usize, usize), Vec<RootedTree>> = BTreeMap::new();
    for (k, t) in built {
        map.entry(k).or_default().push(t);
    }
    Ok(ForestCover {
        eps: p.eps,
        delta: h.delta,
        width: h.width,
        forests: map.into_values().map(|trees| Forest { trees }).collect(),
        slots: h.depth() * lg * ig,
    })
}

/// A family of trees over vertices `0..n`; ids `>= n` are extra vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeCover {
    pub n: usize,
    pub trees: Vec<RootedTree>,
}

/// Joins the roots of each forest to a fresh hub vertex with weight-`delta`
/// edges. Single-tree forests are kept as they are.
pub fn forests_to_trees(fc: &ForestCover, n: usize) -> TreeCover {
    let mut next = n;
    let trees = fc
        .forests
        .iter()
        .map(|f| {
            if f.trees.len() == 1 {
                return f.trees[0].clone();
            }
            let hub = next;
            next += 1;
            let mut edges = Vec::new();
            for t in &f.trees {
                edges.push((t.root(), hub, fc.delta));
                edges.extend(t.edges().map(|(a, b, w)| (b, a, w)));
            }
            RootedTree::from_edges(TreeKind::Steiner, hub, &edges).expect("hub tree")
        })
        .collect();
    TreeCover { n, trees }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverReport {
    pub forests: usize,
    pub trees: usize,
    pub forest_bound: usize,
    pub pairs: usize,
    pub max_additive: f64,
    pub additive_bound: f64,
    pub max_root_additive: f64,
    pub max_tree_diameter: f64,
}

/// Checks the cover against exact distances on every pair: trees are
/// subgraphs of `g`, forests are vertex-disjoint, tree diameters stay within
/// `10 delta`, and the best tree distance (and best path through a root) lies
/// in `[dist, dist + 8 eps delta]`.
pub fn verify_cover(g: &WeightedGraph, oracle: &ExactOracle, fc: &ForestCover) -> Result<CoverReport> {
    let n = g.n();
    let tol = TOL * fc.delta.max(1.0);
    let mut rep = CoverReport {
        forests: fc.forests.len(),
        trees: fc.tree_count(),
        forest_bound: forest_bound(fc.eps, fc.width, fc.delta),
        additive_bound: fc.additive_bound(),
        ..Default::default()
    };
    for (fi, f) in fc.forests.iter().enumerate() {
        let mut seen = vec![false; n];
        for t in &f.trees {
            for &v in &t.vertices {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Invariant(format!("forest {fi} holds vertex {v} twice")));
                }
            }
            for (a, b, w) in t.edges() {
                if g.weight(a, b) != Some(w) {
                    return Err(Error::Invariant(format!("tree edge {a}-{b} is not a graph edge")));
                }
            }
            let d = tree_diameter(t);
            rep.max_tree_diameter = rep.max_tree_diameter.max(d);
            if d > 2.0 * (GAMMA + 1.0) * fc.delta + tol {
                return Err(Error::Invariant(format!("tree diameter {d} exceeds 10 delta")));
            }
        }
    }
    if rep.forests > rep.forest_bound {
        return Err(Error::Invariant(format!("{} forests exceed the bound {}", rep.forests, rep.forest_bound)));
    }
    let index = TreeSetIndex::new(n, fc.forests.iter().flat_map(|f| f.trees.iter()));
    let rows: Vec<Result<(f64, f64)>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut worst = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for v in u + 1..n {
                let d = oracle.dist(u, v);
                let (t, _) = index.min_distance(u, v);
                let r = index.min_root_path(u, v);
                if t < d - tol || t > d + rep.additive_bound + tol || r > d + rep.additive_bound + tol {
                    return Err(Error::Invariant(format!(
                        "pair ({u}, {v}): distance {d}, best tree {t}, best root path {r}"
                    )));
                }
                worst.0 = worst.0.max(t - d);
                worst.1 = worst.1.max(r - d);
            }
            Ok(worst)
        })
        .collect();
    rep.max_additive = 0.0;
    for r in rows {
        let (a, b) = r?;
        rep.max_additive = rep.max_additive.max(a);
        rep.max_root_additive = rep.max_root_additive.max(b);
    }
    rep.pairs = n * (n - 1) / 2;
    Ok(rep)
}
