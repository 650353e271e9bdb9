//! Shortcut partitions for graphs given with a tree decomposition.
//!
//! Every bag gets its own copy of each of its vertices; copies of a vertex in
//! adjacent bags are tied by weight-0 edges and each bag becomes a clique
//! weighted by graph distance. Balls of radius `eps * delta` are then grown
//! downwards from root bags over `k + 1` rounds, and a labeled shortest-path
//! forest from all centers turns the overlapping balls into a partition.

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::{mask, WeightedGraph};
use crate::partition::{cost, Cluster, Partition};
use crate::sssp::{dijkstra, multi_source, TOL};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use std::collections::HashMap;

/// The copied graph. Copy ids are grouped by bag in bag order.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub graph: WeightedGraph,
    pub copy_of: Vec<usize>,
    pub bag_of: Vec<usize>,
    /// Copy ids of each bag, aligned with the bag's vertex list.
    pub copies: Vec<Vec<usize>>,
}

fn bag_pair_distances(g: &WeightedGraph, td: &TreeDecomposition) -> HashMap<(usize, usize), f64> {
    let mut sources: Vec<usize> = td.bags.iter().flatten().copied().collect();
    sources.sort_unstable();
    sources.dedup();
    let rows: HashMap<usize, Vec<f64>> = sources.par_iter().map(|&s| (s, dijkstra(g, s, None, None).dist)).collect();
    let mut out = HashMap::new();
    for bag in &td.bags {
        for &a in bag {
            for &b in bag {
                if a < b {
                    out.insert((a, b), rows[&a][b]);
                }
            }
        }
    }
    out
}

pub fn preprocess(g: &WeightedGraph, td: &TreeDecomposition) -> Result<Preprocessed> {
    td.validate(g).map_err(|e| Error::InvalidInput(format!("invalid decomposition: {e}")))?;
    let dist = bag_pair_distances(g, td);
    let mut copy_of = Vec::new();
    let mut bag_of = Vec::new();
    let mut copies = Vec::with_capacity(td.bags.len());
    for (b, bag) in td.bags.iter().enumerate() {
        let ids: Vec<usize> = bag
            .iter()
            .map(|&v| {
                copy_of.push(v);
                bag_of.push(b);
                copy_of.len() - 1
            })
            .collect();
        copies.push(ids);
    }
    let mut edges = Vec::new();
    for (b, bag) in td.bags.iter().enumerate() {
        for i in 0..bag.len() {
            for j in i + 1..bag.len() {
                let (x, y) = (bag[i].min(bag[j]), bag[i].max(bag[j]));
                edges.push((copies[b][i], copies[b][j], dist[&(x, y)]));
            }
        }
    }
    for &(a, b) in &td.edges {
        for (i, &v) in td.bags[a].iter().enumerate() {
            if let Some(j) = td.bags[b].iter().position(|&x| x == v) {
                edges.push((copies[a][i], copies[b][j], 0.0));
            }
        }
    }
    let graph = WeightedGraph::new(copy_of.len(), edges)?;
    Ok(Preprocessed { graph, copy_of, bag_of, copies })
}

/// `g` plus every bag clique, weighted by graph distance. Same metric as `g`.
pub fn augmented(g: &WeightedGraph, td: &TreeDecomposition) -> Result<WeightedGraph> {
    let dist = bag_pair_distances(g, td);
    let mut w: HashMap<(usize, usize), f64> = dist;
    for e in g.edges() {
        let k = (e.u.min(e.v), e.u.max(e.v));
        let slot = w.entry(k).or_insert(e.w);
        *slot = slot.min(e.w);
    }
    let mut edges: Vec<(usize, usize, f64)> = w.into_iter().map(|((a, b), x)| (a, b, x)).collect();
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    WeightedGraph::new(g.n(), edges)
}

/// A ball created in some round from a root bag.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub round: usize,
    pub root_bag: usize,
    /// Copy id of the center.
    pub center: usize,
    pub copies: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TwPartition {
    pub pre: Preprocessed,
    pub width: usize,
    pub balls: Vec<Ball>,
    /// Unclustered copies left after each round.
    pub unclustered: Vec<usize>,
    pub partition: Partition,
}

/// Builds the partition. `delta` is the diameter of `g`.
pub fn tw_partition(g: &WeightedGraph, td: &TreeDecomposition, eps: f64, delta: f64) -> Result<TwPartition> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {eps}")));
    }
    let pre = preprocess(g, td)?;
    let k = td.width();
    let (parent, order) = td.rooted()?;
    let nb = td.bags.len();
    let mut children = vec![Vec::new(); nb];
    for &b in &order {
        if let Some(p) = parent[b] {
            children[p].push(b);
        }
    }
    let radius = eps * delta;
    let nc = pre.copy_of.len();
    let mut clustered = vec![false; nc];
    let mut balls = Vec::new();
    let mut unclustered = Vec::new();
    for round in (1..=k + 1).rev() {
        let mut alive = vec![true; nb];
        let mut stack = vec![order[0]];
        while let Some(r) = stack.pop() {
            let mut sub = vec![r];
            let mut i = 0;
            while i < sub.len() {
                let b = sub[i];
                sub.extend(children[b].iter().copied().filter(|&c| alive[c]));
                i += 1;
            }
            let mut in_sub = vec![false; nc];
            for &b in &sub {
                for &c in &pre.copies[b] {
                    in_sub[c] = true;
                }
            }
            let mut newly = Vec::new();
            for &u in &pre.copies[r] {
                if clustered[u] {
                    continue;
                }
                let t = dijkstra(&pre.graph, u, None, Some(radius + TOL * delta));
                let ball: Vec<usize> =
                    (0..nc).filter(|&c| in_sub[c] && !clustered[c] && t.dist[c] <= radius + TOL * delta).collect();
                for &c in &ball {
                    clustered[c] = true;
                }
                newly.extend(ball.iter().copied());
                balls.push(Ball { round, root_bag: r, center: u, copies: ball });
            }
            let removed: Vec<usize> = if newly.is_empty() {
                vec![r]
            } else {
                let mut bags: Vec<usize> = newly.iter().map(|&c| pre.bag_of[c]).collect();
                bags.sort_unstable();
                bags.dedup();
                bags
            };
            for &b in &removed {
                alive[b] = false;
            }
            // tops of the components left in this subtree
            let mut tops: Vec<usize> = sub
                .iter()
                .copied()
                .filter(|&b| alive[b] && parent[b].map_or(false, |p| !alive[p]))
                .collect();
            tops.sort_unstable_by(|a, b| b.cmp(a));
            stack.extend(tops);
        }
        let left = clustered.iter().filter(|c| !**c).count();
        unclustered.push(left);
        if left == 0 {
            break;
        }
    }
    if clustered.iter().any(|c| !c) {
        return Err(Error::Invariant(format!("copies left unclustered after {} rounds", k + 1)));
    }
    let partition = finalize_clusters(&pre, &balls, eps, delta)?;
    Ok(TwPartition { pre, width: k, balls, unclustered, partition })
}

/// Turns overlapping balls into a partition of the original vertices: every
/// copy follows its nearest center, ties to the smaller center copy id, and
/// copies of one vertex always agree because they are 0 apart.
pub fn finalize_clusters(pre: &Preprocessed, balls: &[Ball], eps: f64, delta: f64) -> Result<Partition> {
    let n = pre.copy_of.iter().max().map_or(0, |&v| v + 1);
    let nc = pre.copy_of.len();
    if balls.is_empty() {
        return Err(Error::Invariant("no cluster centers".into()));
    }
    let sources: Vec<(usize, usize)> = balls.iter().map(|b| (b.center, b.center)).collect();
    let spt = multi_source(&pre.graph, &sources, None, None);
    let mut label_of = vec![usize::MAX; n];
    for c in 0..nc {
        let v = pre.copy_of[c];
        if label_of[v] == usize::MAX {
            label_of[v] = spt.label[c];
        } else if label_of[v] != spt.label[c] {
            return Err(Error::Invariant(format!("copies of vertex {v} landed in different clusters")));
        }
    }
    let round_of: HashMap<usize, usize> = balls.iter().map(|b| (b.center, b.round)).collect();
    let mut members: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for v in 0..n {
        let i = *slot.entry(label_of[v]).or_insert_with(|| {
            members.push((label_of[v], Vec::new()));
            members.len() - 1
        });
        members[i].1.push(v);
    }
    members.sort_unstable();
    let clusters = members
        .into_iter()
        .map(|(center, vertices)| Cluster {
            center: pre.copy_of[center],
            column: None,
            ordinal: round_of[&center],
            vertices,
        })
        .collect();
    Partition::from_clusters(n, eps, 0.0, delta, clusters)
}

/// Hop bound from the round recurrence, starting from `k + 1` clusters.
pub fn hop_recurrence(k: usize, eps: f64) -> f64 {
    let a = (k as f64 + 1.0) * (1.0 / eps + 3.0);
    let mut j = k as f64 + 1.0;
    for _ in 2..=k + 1 {
        j = (a + 1.0) * j + a;
    }
    j
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwReport {
    pub clusters: usize,
    pub max_diameter: f64,
    pub diameter_bound: f64,
    pub pairs: usize,
    pub max_hops: usize,
    pub hop_bound: f64,
}

/// Checks strong diameters in `g` plus bag cliques and cluster-hop counts of
/// shortest paths. All pairs for small graphs, otherwise `sample` pairs.
pub fn verify_tw_partition(
    g: &WeightedGraph,
    td: &TreeDecomposition,
    p: &Partition,
    sample: usize,
    seed: u64,
) -> Result<TwReport> {
    let plus = augmented(g, td)?;
    let tol = TOL * p.delta.max(1.0);
    let bound = 2.0 * p.eps * p.delta;
    let max_diameter = p
        .clusters
        .par_iter()
        .map(|c| {
            let scope = mask(g.n(), &c.vertices);
            c.vertices
                .iter()
                .map(|&v| {
                    let t = dijkstra(&plus, v, Some(&scope), None);
                    c.vertices.iter().map(|&x| t.dist[x]).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    if max_diameter > bound + tol {
        return Err(Error::Invariant(format!("cluster diameter {max_diameter} exceeds {bound}")));
    }
    let cg = p.cluster_graph(g);
    let n = g.n();
    let sources: Vec<usize> = if n <= 300 || sample >= n {
        (0..n).collect()
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut crate::generate::rng(seed));
        all.truncate(sample.max(1));
        all
    };
    let (pairs, max_hops) = sources
        .par_iter()
        .map(|&u| {
            let t = dijkstra(g, u, None, None);
            let hops = (0..n).filter(|&v| v != u).map(|v| cost(p, &cg, &t.path_to(v))).max().unwrap_or(0);
            (n - 1, hops)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    let hop_bound = hop_recurrence(td.width(), p.eps);
    if max_hops as f64 > hop_bound {
        return Err(Error::Invariant(format!("hop count {max_hops} exceeds {hop_bound}")));
    }
    Ok(TwReport { clusters: p.clusters.len(), max_diameter, diameter_bound: bound, pairs, max_hops, hop_bound })
}
