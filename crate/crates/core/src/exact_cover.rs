//! Exact BFS-forest covers of unweighted graphs with small diameter.
//!
//! Start from star forests of the edges and repeatedly apply root expansion:
//! each tree of a forest grows by one hop in a way that keeps every path of
//! the current length preserved by some tree, with the path running through
//! the root.

use crate::error::{Error, Result};
use crate::forest_cover::TreeCover;
use crate::graph::WeightedGraph;
use crate::partition::{cost, Partition};
use crate::sssp::dijkstra;
use crate::tree::{RootedTree, TreeKind};
use rayon::prelude::*;
use std::collections::{HashMap, HashSet, VecDeque};

/// Vertex-disjoint trees.
pub type BfsForest = Vec<RootedTree>;

/// Smallest-last order of an adjacency list, ties by smaller id.
fn degeneracy_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(|l| l.len()).collect();
    let mut removed = vec![false; n];
    let mut heap: std::collections::BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&(d, v)) = heap.iter().next() {
        heap.remove(&(d, v));
        removed[v] = true;
        order.push(v);
        for &u in &adj[v] {
            if !removed[u] {
                heap.remove(&(deg[u], u));
                deg[u] -= 1;
                heap.insert((deg[u], u));
            }
        }
    }
    order
}

/// Degeneracy of an adjacency list.
pub fn degeneracy(adj: &[Vec<usize>]) -> usize {
    let order = degeneracy_order(adj);
    let mut pos = vec![0; adj.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    (0..adj.len()).map(|v| adj[v].iter().filter(|&&u| pos[u] > pos[v]).count()).max().unwrap_or(0)
}

/// Splits the edges into at most `2d` star forests. Each star is
/// `(center, leaves)`.
pub fn star_decomposition(adj: &[Vec<usize>]) -> Vec<Vec<(usize, Vec<usize>)>> {
    let n = adj.len();
    let order = degeneracy_order(adj);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // parents[v][k]: k-th later neighbor of v, which is v's parent in forest k
    let parents: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut l: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
            l.sort_unstable();
            l
        })
        .collect();
    let d = parents.iter().map(|l| l.len()).max().unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..d {
        let mut tadj = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(&p) = parents[v].get(k) {
                tadj[v].push(p);
                tadj[p].push(v);
            }
        }
        // root each tree at a vertex of maximum degree so stars stay whole
        let mut by_degree: Vec<usize> = (0..n).filter(|&v| !tadj[v].is_empty()).collect();
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(tadj[v].len()), v));
        let mut depth = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for r in by_degree {
            if depth[r] != usize::MAX {
                continue;
            }
            depth[r] = 0;
            let mut q = VecDeque::from([r]);
            while let Some(x) = q.pop_front() {
                for &y in &tadj[x] {
                    if depth[y] == usize::MAX {
                        depth[y] = depth[x] + 1;
                        parent[y] = x;
                        q.push_back(y);
                    }
                }
            }
        }
        for parity in 0..2 {
            let mut stars: Vec<(usize, Vec<usize>)> = Vec::new();
            let mut slot: HashMap<usize, usize> = HashMap::new();
            for v in 0..n {
                let p = parent[v];
                if p != usize::MAX && depth[p] % 2 == parity {
                    let i = *slot.entry(p).or_insert_with(|| {
                        stars.push((p, Vec::new()));
                        stars.len() - 1
                    });
                    stars[i].1.push(v);
                }
            }
            if !stars.is_empty() {
                stars.sort_unstable();
                out.push(stars);
            }
        }
    }
    out
}

fn adjacency(g: &WeightedGraph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).iter().map(|p| p.0).collect()).collect()
}

fn star_tree(center: usize, leaves: &[usize]) -> RootedTree {
    let edges: Vec<(usize, usize, f64)> = leaves.iter().map(|&l| (l, center, 1.0)).collect();
    RootedTree::from_edges(TreeKind::Spanning, center, &edges).expect("star")
}

/// The base layer: star forests covering every edge.
pub fn star_forest_base(g: &WeightedGraph) -> Vec<BfsForest> {
    star_decomposition(&adjacency(g))
        .into_iter()
        .map(|stars| stars.iter().map(|(c, l)| star_tree(*c, l)).collect())
        .collect()
}

/// BFS tree of `G[set]` from `root`, neighbors visited by id.
pub fn bfs_tree(g: &WeightedGraph, set: &[usize], root: usize) -> RootedTree {
    let inside: HashSet<usize> = set.iter().copied().collect();
    let mut seen = HashSet::from([root]);
    let mut q = VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(x) = q.pop_front() {
        for &(y, _) in g.neighbors(x) {
            if inside.contains(&y) && seen.insert(y) {
                edges.push((y, x, 1.0));
                q.push_back(y);
            }
        }
    }
    RootedTree::from_edges(TreeKind::Spanning, root, &edges).expect("bfs tree")
}

/// One root-expansion step: the forest itself plus, for every color class
/// of the contracted cluster graph, the star forests of the class's
/// contraction expanded back into BFS trees.
pub fn root_expansion(g: &WeightedGraph, forest: &BfsForest) -> Result<Vec<BfsForest>> {
    check_bfs_forest(g, forest)?;
    Ok(expand_unchecked(g, forest))
}

/// Verifies that `forest` consists of vertex-disjoint BFS trees of their
/// induced subgraphs whose edges belong to `g`.
pub fn check_bfs_forest(g: &WeightedGraph, forest: &BfsForest) -> Result<()> {
    let n = g.n();
    let mut used = vec![false; n];
    for t in forest {
        for &v in &t.vertices {
            if v >= n || std::mem::replace(&mut used[v], true) {
                return Err(Error::InvalidInput(format!("vertex {v} repeated or out of range")));
            }
        }
        for (a, b, _) in t.edges() {
            if g.edge_index(a, b).is_none() {
                return Err(Error::InvalidInput(format!("tree edge {a}-{b} is not a graph edge")));
            }
        }
        let scope = crate::graph::mask(n, &t.vertices);
        let bfs = dijkstra(g, t.root(), Some(&scope), None);
        let rd = t.root_distances();
        for (i, &v) in t.vertices.iter().enumerate() {
            if rd[i] != bfs.dist[v] {
                return Err(Error::InvalidInput(format!("tree rooted at {} is not a BFS tree at {v}", t.root())));
            }
        }
    }
    Ok(())
}

fn expand_unchecked(g: &WeightedGraph, forest: &BfsForest) -> Vec<BfsForest> {
    let n = g.n();
    let nt = forest.len();
    let mut tree_of = vec![usize::MAX; n];
    for (i, t) in forest.iter().enumerate() {
        for &v in &t.vertices {
            tree_of[v] = i;
        }
    }
    // cluster graph: trees first, then every uncovered vertex
    let node = |v: usize| if tree_of[v] != usize::MAX { tree_of[v] } else { nt + v };
    let mut cadj = vec![Vec::new(); nt + n];
    for e in g.edges() {
        let (a, b) = (node(e.u), node(e.v));
        if a != b {
            cadj[a].push(b);
            cadj[b].push(a);
        }
    }
    for l in &mut cadj {
        l.sort_unstable();
        l.dedup();
    }
    let order = degeneracy_order(&cadj);
    let mut color = vec![usize::MAX; nt + n];
    for &x in order.iter().rev() {
        let used: HashSet<usize> = cadj[x].iter().map(|&y| color[y]).collect();
        color[x] = (0..).find(|c| !used.contains(c)).unwrap();
    }
    let colors = (0..nt).map(|t| color[t] + 1).max().unwrap_or(0);
    let mut out = vec![forest.clone()];
    for c in 0..colors {
        // contract only the trees of color c; node ids: vertices 0..n, trees n..
        let cnode = |v: usize| {
            let t = tree_of[v];
            if t != usize::MAX && color[t] == c {
                n + t
            } else {
                v
            }
        };
        let mut adj = vec![Vec::new(); n + nt];
        for e in g.edges() {
            let (a, b) = (cnode(e.u), cnode(e.v));
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        let expand = |x: usize| -> Vec<usize> {
            if x >= n {
                forest[x - n].vertices.clone()
            } else {
                vec![x]
            }
        };
        for stars in star_decomposition(&adj) {
            let trees: BfsForest = stars
                .iter()
                .map(|(center, leaves)| {
                    let root = if *center >= n { forest[center - n].root() } else { *center };
                    let mut set = expand(*center);
                    for &l in leaves {
                        set.extend(expand(l));
                    }
                    bfs_tree(g, &set, root)
                })
                .collect();
            out.push(trees);
        }
    }
    out
}

type Signature = Vec<(usize, Vec<(usize, usize)>)>;

fn canonical(f: &BfsForest) -> Signature {
    let mut k: Signature = f
        .iter()
        .map(|t| {
            let mut e: Vec<(usize, usize)> = t.edges().map(|(a, b, _)| (a, b)).collect();
            e.sort_unstable();
            (t.root(), e)
        })
        .collect();
    k.sort_unstable();
    k
}

/// Exact cover preserving every path of at most `depth` hops. New forests
/// are expanded once; duplicates are dropped by their (root, vertex set)
/// signature. Fails once more than `cap` forests exist.
pub fn exact_cover(g: &WeightedGraph, depth: usize, cap: usize) -> Result<Vec<BfsForest>> {
    if !g.is_unweighted() {
        return Err(Error::InvalidInput("exact covers need unit edge weights".into()));
    }
    let mut seen: HashSet<Signature> = HashSet::new();
    let mut all: Vec<BfsForest> = Vec::new();
    let mut frontier = Vec::new();
    for f in star_forest_base(g) {
        if seen.insert(canonical(&f)) {
            frontier.push(all.len());
            all.push(f);
        }
    }
    for _ in 1..depth.max(1) {
        let mut next = Vec::new();
        let expanded: Vec<Vec<BfsForest>> = frontier.par_iter().map(|&i| expand_unchecked(g, &all[i])).collect();
        for group in expanded {
            for f in group {
                if seen.insert(canonical(&f)) {
                    next.push(all.len());
                    all.push(f);
                    if all.len() > cap {
                        return Err(Error::CapExceeded(format!("exact cover exceeds {cap} forests")));
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(all)
}

/// Forests leave one-vertex trees implicit; this adds them back for the
/// vertices `0..n` the forest misses.
pub fn spanning(forest: &BfsForest, n: usize) -> BfsForest {
    let mut have = vec![false; n];
    for t in forest {
        for &v in &t.vertices {
            have[v] = true;
        }
    }
    let mut out = forest.clone();
    out.extend((0..n).filter(|&v| !have[v]).map(|v| RootedTree::singleton(TreeKind::Spanning, v)));
    out
}

/// Whether some tree holds every vertex of `path` and has its root on it.
pub fn preserves(forest: &BfsForest, path: &[usize]) -> bool {
    forest.iter().any(|t| {
        let set: HashSet<usize> = t.vertices.iter().copied().collect();
        path.iter().all(|v| set.contains(v)) && path.contains(&t.root())
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExactReport {
    pub forests: usize,
    pub trees: usize,
    pub pairs: usize,
}

/// Checks that forests are vertex-disjoint BFS trees of their induced
/// subgraphs, that tree edges are graph edges, and that every pair is
/// realized exactly by some tree.
pub fn verify_exact(g: &WeightedGraph, forests: &[BfsForest]) -> Result<ExactReport> {
    let n = g.n();
    let mut best = vec![u32::MAX; n * n];
    for (fi, f) in forests.iter().enumerate() {
        check_bfs_forest(g, f).map_err(|e| Error::Invariant(format!("forest {fi}: {e}")))?;
        for t in f {
            let lca = crate::tree::LcaIndex::new(t);
            for &a in &t.vertices {
                for &b in &t.vertices {
                    let d = lca.distance(a, b).unwrap() as u32;
                    let slot = &mut best[a * n + b];
                    *slot = (*slot).min(d);
                }
            }
        }
    }
    for u in 0..n {
        let t = dijkstra(g, u, None, None);
        for v in 0..n {
            if u != v && best[u * n + v] as f64 != t.dist[v] {
                return Err(Error::Invariant(format!(
                    "pair ({u}, {v}) has distance {} but best tree gives {}",
                    t.dist[v], best[u * n + v]
                )));
            }
        }
    }
    Ok(ExactReport {
        forests: forests.len(),
        trees: forests.iter().map(|f| f.len()).sum(),
        pairs: n * (n - 1) / 2,
    })
}

/// Replaces a tree over cluster ids by a star over all vertices of its
/// clusters, centered at the smallest vertex of the root cluster, with edge
/// weights equal to graph distances.
pub fn star_transform(g: &WeightedGraph, p: &Partition, t: &RootedTree) -> RootedTree {
    let r = p.clusters[t.root()].vertices[0];
    let sp = dijkstra(g, r, None, None);
    let mut edges = Vec::new();
    for &c in &t.vertices {
        for &v in &p.clusters[c].vertices {
            if v != r {
                edges.push((v, r, sp.dist[v]));
            }
        }
    }
    RootedTree::from_edges(TreeKind::Steiner, r, &edges).expect("star")
}

/// Cover from a shortcut partition: an exact cover of the cluster graph deep
/// enough for every certified hop count, followed by star transforms.
/// Returns the cover and the hop depth used.
pub fn partition_to_cover(g: &WeightedGraph, p: &Partition, cap: usize) -> Result<(TreeCover, usize)> {
    let cg = p.cluster_graph(g);
    let k = p.clusters.len();
    let mut edges = Vec::new();
    for (a, l) in cg.iter().enumerate() {
        for &b in l {
            if a < b {
                edges.push((a, b, 1.0));
            }
        }
    }
    let mut hops = 0;
    for u in 0..g.n() {
        let t = dijkstra(g, u, None, None);
        for v in u + 1..g.n() {
            hops = hops.max(cost(p, &cg, &t.path_to(v)));
        }
    }
    let trees = if k == 1 {
        vec![star_transform(g, p, &RootedTree::singleton(TreeKind::Spanning, 0))]
    } else {
        let cgraph = WeightedGraph::new(k, edges)?;
        let forests = exact_cover(&cgraph, hops, cap)?;
        let mut trees = Vec::new();
        for f in &forests {
            for t in f {
                trees.push(star_transform(g, p, t));
            }
        }
        // isolated clusters still need a tree of their own
        let mut has = vec![false; k];
        for f in &forests {
            for t in f {
                for &c in &t.vertices {
                    has[c] = true;
                }
            }
        }
        for c in (0..k).filter(|&c| !has[c]) {
            trees.push(star_transform(g, p, &RootedTree::singleton(TreeKind::Spanning, c)));
        }
        trees
    };
    Ok((TreeCover { n: g.n(), trees }, hops))
}
