//! Distance queries over a tree cover and terminal emulators.

use crate::error::{Error, Result};
use crate::forest_cover::TreeCover;
use crate::graph::WeightedGraph;
use crate::tree::{RootedTree, TreeKind, TreeSetIndex};
use std::collections::{BTreeMap, HashMap};

/// One LCA index per cover tree. Answers are the minimum tree distance.
#[derive(Debug, Clone)]
pub struct DistanceOracle {
    n: usize,
    ids: usize,
    trees: usize,
    index: TreeSetIndex,
}

/// Indexes every tree of `cover`. Every vertex `0..n` must lie in a tree.
pub fn build_oracle(cover: &TreeCover) -> Result<DistanceOracle> {
    let ids = cover
        .trees
        .iter()
        .flat_map(|t| t.vertices.iter().copied())
        .max()
        .map_or(cover.n, |m| (m + 1).max(cover.n));
    let index = TreeSetIndex::new(ids, &cover.trees);
    if let Some(v) = (0..cover.n).find(|&v| index.trees_of(v).is_empty()) {
        return Err(Error::InvalidInput(format!("vertex {v} is in no tree of the cover")));
    }
    Ok(DistanceOracle { n: cover.n, ids, trees: cover.trees.len(), index })
}

impl DistanceOracle {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tree_count(&self) -> usize {
        self.trees
    }

    /// Total Euler tour length over all trees.
    pub fn index_size(&self) -> usize {
        self.index.lca.iter().map(|l| l.euler_len()).sum()
    }

    /// Approximate distance and the number of LCA lookups it took.
    pub fn query_counted(&self, u: usize, v: usize) -> Result<(f64, usize)> {
        for x in [u, v] {
            if x >= self.ids || self.index.trees_of(x).is_empty() {
                return Err(Error::InvalidInput(format!("vertex {x} is not covered")));
            }
        }
        if u == v {
            return Ok((0.0, 0));
        }
        Ok(self.index.min_distance(u, v))
    }

    pub fn query(&self, u: usize, v: usize) -> Result<f64> {
        self.query_counted(u, v).map(|(d, _)| d)
    }
}

/// Union of pruned cover trees over a terminal set. Vertex `i` of `graph` is
/// `terminals[i]` for `i < terminals.len()`; later vertices are branch points
/// of single trees, listed in `branches` as `(tree, vertex id)`.
#[derive(Debug, Clone)]
pub struct Emulator {
    pub terminals: Vec<usize>,
    pub trees: Vec<RootedTree>,
    pub branches: Vec<(usize, usize)>,
    pub graph: WeightedGraph,
}

/// Keeps the part of `t` spanning `terminals` and drops non-terminal
/// vertices of degree two. `None` if the tree holds no terminal.
pub fn prune_tree(t: &RootedTree, is_terminal: impl Fn(usize) -> bool) -> Result<Option<RootedTree>> {
    let Some(s) = t.vertices.iter().copied().find(|&v| is_terminal(v)) else {
        return Ok(None);
    };
    let t = t.rerooted(s)?;
    let k = t.len();
    let mut below = vec![0usize; k];
    let mut kids = vec![0usize; k];
    for i in (0..k).rev() {
        if is_terminal(t.vertices[i]) {
            below[i] += 1;
        }
        if let Some(p) = t.parent[i] {
            if below[i] > 0 {
                below[p] += below[i];
                kids[p] += 1;
            }
        }
    }
    let keep: Vec<bool> = (0..k).map(|i| is_terminal(t.vertices[i]) || (below[i] > 0 && kids[i] >= 2)).collect();
    let dist = t.root_distances();
    let mut up = vec![0usize; k];
    let mut edges = Vec::new();
    for i in 1..k {
        let p = t.parent[i].unwrap();
        let anchor = if keep[p] { p } else { up[p] };
        up[i] = anchor;
        if keep[i] && below[i] > 0 {
            edges.push((t.vertices[i], t.vertices[anchor], dist[i] - dist[anchor]));
        }
    }
    RootedTree::from_edges(TreeKind::Steiner, s, &edges).map(Some)
}

/// Prunes every cover tree to `terminals` and merges the results,
/// identifying terminal copies and keeping the lighter of parallel edges.
pub fn build_emulator(cover: &TreeCover, terminals: &[usize]) -> Result<Emulator> {
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, &s) in terminals.iter().enumerate() {
        if s >= cover.n {
            return Err(Error::InvalidInput(format!("terminal {s} is not a vertex")));
        }
        if slot.insert(s, i).is_some() {
            return Err(Error::InvalidInput(format!("terminal {s} listed twice")));
        }
    }
    let mut trees = Vec::new();
    let mut branches = Vec::new();
    let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (ti, t) in cover.trees.iter().enumerate() {
        let Some(p) = prune_tree(t, |v| slot.contains_key(&v))? else { continue };
        let mut local = vec![0usize; p.len()];
        for (i, &v) in p.vertices.iter().enumerate() {
            local[i] = match slot.get(&v) {
                Some(&s) => s,
                None => {
                    branches.push((ti, v));
                    terminals.len() + branches.len() - 1
                }
            };
        }
        for i in 1..p.len() {
            let (a, b) = (local[p.parent[i].unwrap()], local[i]);
            let w = edges.entry((a.min(b), a.max(b))).or_insert(f64::INFINITY);
            *w = w.min(p.weight[i]);
        }
        trees.push(p);
    }
    let n = (terminals.len() + branches.len()).max(1);
    let graph = WeightedGraph::new_unchecked(n, edges.into_iter().map(|((a, b), w)| (a, b, w)).collect())?;
    Ok(Emulator { terminals: terminals.to_vec(), trees, branches, graph })
}
