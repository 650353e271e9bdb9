//! Embedding planar graphs into low-treewidth graphs with additive distortion.
//!
//! Clusters of a shortcut partition become stars around their smallest
//! vertex, every tree of the additive forest cover adds edges from its root
//! to its vertices, and a heuristic decomposition of the star graph is
//! widened by the roots of the translated forests.

use crate::decomposition::{min_fill, TreeDecomposition};
use crate::embedding::PlanarEmbedding;
use crate::error::{Error, Result};
use crate::forest_cover::{cover_hierarchy, ForestCover};
use crate::graph::{mask, WeightedGraph};
use crate::partition::{build_partition, Partition};
use crate::sssp::{dijkstra, ExactOracle, TOL};
use crate::tree::{RootedTree, TreeKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    /// The host graph on the vertices of the input; the vertex map is the
    /// identity.
    pub host: WeightedGraph,
    pub td: TreeDecomposition,
    pub base_width: usize,
    pub forests: usize,
    pub additive_bound: f64,
}

impl Embedding {
    pub fn width(&self) -> usize {
        self.td.width()
    }

    /// Largest bag size allowed by the construction.
    pub fn bag_bound(&self) -> usize {
        (self.forests + 1) * (self.base_width + 1)
    }
}

fn rows(g: &WeightedGraph, sources: &[usize]) -> HashMap<usize, Vec<f64>> {
    let mut s = sources.to_vec();
    s.sort_unstable();
    s.dedup();
    s.par_iter().map(|&x| (x, dijkstra(g, x, None, None).dist)).collect()
}

fn centers(p: &Partition) -> Vec<usize> {
    p.clusters.iter().map(|c| *c.vertices.iter().min().unwrap()).collect()
}

fn from_weights(n: usize, w: BTreeMap<(usize, usize), f64>) -> Result<WeightedGraph> {
    WeightedGraph::new(n, w.into_iter().map(|((a, b), x)| (a, b, x)).collect())
}

fn put(w: &mut BTreeMap<(usize, usize), f64>, a: usize, b: usize, x: f64) {
    if a != b {
        let slot = w.entry((a.min(b), a.max(b))).or_insert(x);
        *slot = slot.min(x);
    }
}

/// Replaces every cluster by a star around its smallest vertex and every
/// edge between clusters by an edge between their centers. All weights are
/// graph distances.
pub fn contract_to_stars(g: &WeightedGraph, p: &Partition) -> Result<WeightedGraph> {
    let cs = centers(p);
    let d = rows(g, &cs);
    let mut w = BTreeMap::new();
    for (i, c) in p.clusters.iter().enumerate() {
        for &v in &c.vertices {
            put(&mut w, cs[i], v, d[&cs[i]][v]);
        }
    }
    for e in g.edges() {
        let (a, b) = (cs[p.cluster_of[e.u]], cs[p.cluster_of[e.v]]);
        put(&mut w, a, b, d[&a][b]);
    }
    from_weights(g.n(), w)
}

/// Heuristic decomposition of the star graph.
pub fn decompose(gp: &WeightedGraph) -> TreeDecomposition {
    min_fill(gp)
}

fn spanning_tree(g: &WeightedGraph, set: &[usize], root: usize) -> RootedTree {
    let inside = mask(g.n(), set);
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut q = VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(x) = q.pop_front() {
        for &(y, e) in g.neighbors(x) {
            if inside[y] && !seen[y] {
                seen[y] = true;
                edges.push((y, x, g.edge(e).w));
                q.push_back(y);
            }
        }
    }
    RootedTree::from_edges(TreeKind::Spanning, root, &edges).expect("spanning tree")
}

/// Carries every tree of the cover to the star graph: the new tree spans the
/// union of the clusters the old one touches and keeps its root.
pub fn translate_forests(gp: &WeightedGraph, p: &Partition, fc: &ForestCover) -> Result<Vec<Vec<RootedTree>>> {
    fc.forests
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let mut owner: HashMap<usize, usize> = HashMap::new();
            f.trees
                .iter()
                .enumerate()
                .map(|(ti, t)| {
                    let mut touched: Vec<usize> = t.vertices.iter().map(|&v| p.cluster_of[v]).collect();
                    touched.sort_unstable();
                    touched.dedup();
                    for &c in &touched {
                        if *owner.entry(c).or_insert(ti) != ti {
                            return Err(Error::InvalidInput(format!("forest {fi} has two trees in cluster {c}")));
                        }
                    }
                    let set: Vec<usize> = touched.iter().flat_map(|&c| p.clusters[c].vertices.iter().copied()).collect();
                    let tree = spanning_tree(gp, &set, t.root());
                    if tree.len() != set.len() {
                        return Err(Error::Invariant(format!("translated tree of forest {fi} is disconnected")));
                    }
                    Ok(tree)
                })
                .collect()
        })
        .collect()
}

/// Adds to every bag the roots of all trees containing one of its vertices.
pub fn extend_decomposition(td: &TreeDecomposition, forests: &[Vec<RootedTree>]) -> Result<TreeDecomposition> {
    let n = td.bags.iter().flatten().max().map_or(0, |&v| v + 1);
    let mut roots: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (fi, f) in forests.iter().enumerate() {
        let mut used = HashMap::new();
        for (ti, t) in f.iter().enumerate() {
            for &v in &t.vertices {
                if used.insert(v, ti).is_some() {
                    return Err(Error::InvalidInput(format!("forest {fi} repeats vertex {v}")));
                }
                if v < n {
                    roots[v].push(t.root());
                }
            }
        }
    }
    let bags = td
        .bags
        .iter()
        .map(|bag| {
            let mut b = bag.clone();
            for &v in bag {
                b.extend(roots[v].iter().copied());
            }
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    Ok(TreeDecomposition { bags, edges: td.edges.clone() })
}

/// Star graph plus root edges: the full construction for a given partition
/// and forest cover.
pub fn embed_with(g: &WeightedGraph, p: &Partition, fc: &ForestCover) -> Result<Embedding> {
    let gp = contract_to_stars(g, p)?;
    let mut w: BTreeMap<(usize, usize), f64> = gp.edges().iter().map(|e| ((e.u.min(e.v), e.u.max(e.v)), e.w)).collect();
    let roots: Vec<usize> = fc.forests.iter().flat_map(|f| f.trees.iter().map(|t| t.root())).collect();
    let d = rows(g, &roots);
    for f in &fc.forests {
        for t in &f.trees {
            let r = t.root();
            for &v in &t.vertices {
                put(&mut w, r, v, d[&r][v]);
            }
        }
    }
    let host = from_weights(g.n(), w)?;
    let base = decompose(&gp);
    let translated = translate_forests(&gp, p, fc)?;
    let td = extend_decomposition(&base, &translated)?;
    td.validate(&host)?;
    Ok(Embedding {
        host,
        td,
        base_width: base.width(),
        forests: translated.len(),
        additive_bound: fc.additive_bound(),
    })
}

/// Full pipeline from a planar graph. `delta` is the diameter of `g`.
pub fn embed(g: &WeightedGraph, emb: &PlanarEmbedding, eps: f64, delta: f64) -> Result<Embedding> {
    let sp = build_partition(g, emb, eps, 0.125, delta)?;
    let fc = cover_hierarchy(g, &sp.hierarchy, &sp.partition)?;
    embed_with(g, &sp.partition, &fc)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbedReport {
    pub pairs: usize,
    pub min_slack: f64,
    pub max_additive: f64,
    pub additive_bound: f64,
    pub width: usize,
    pub bag_bound: usize,
}

/// Checks the decomposition, the width accounting and the distortion
/// sandwich for all pairs.
pub fn verify_embedding(g: &WeightedGraph, oracle: &ExactOracle, e: &Embedding) -> Result<EmbedReport> {
    e.td.validate(&e.host)?;
    let bag = e.td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    if bag > e.bag_bound() {
        return Err(Error::Invariant(format!("bag of size {bag} exceeds {}", e.bag_bound())));
    }
    let tol = TOL * oracle.diameter().max(1.0);
    let n = g.n();
    let (min_slack, max_additive) = (0..n)
        .into_par_iter()
        .map(|u| {
            let t = dijkstra(&e.host, u, None, None);
            (0..n).fold((f64::INFINITY, 0.0f64), |(lo, hi), v| {
                let s = t.dist[v] - oracle.dist(u, v);
                (lo.min(s), hi.max(s))
            })
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    if min_slack < -tol {
        return Err(Error::Invariant(format!("host distance undercuts the graph by {}", -min_slack)));
    }
    if max_additive > e.additive_bound + tol {
        return Err(Error::Invariant(format!("additive distortion {max_additive} exceeds {}", e.additive_bound)));
    }
    Ok(EmbedReport {
        pairs: n * (n - 1) / 2,
        min_slack,
        max_additive,
        additive_bound: e.additive_bound,
        width: e.width(),
        bag_bound: e.bag_bound(),
    })
}
