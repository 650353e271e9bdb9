//! Seeded instance generators. Every generator is a pure function of its
//! arguments and seed.

use crate::decomposition::TreeDecomposition;
use crate::embedding::PlanarEmbedding;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Edge weight distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Weights {
    Unit,
    Uniform(f64, f64),
}

impl Weights {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Weights::Unit => 1.0,
            Weights::Uniform(lo, hi) if hi > lo => rng.gen_range(lo..hi),
            Weights::Uniform(lo, _) => lo,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A planar graph with its embedding.
#[derive(Debug, Clone)]
pub struct PlanarInstance {
    pub graph: WeightedGraph,
    pub embedding: PlanarEmbedding,
}

fn build_rotation(n: usize, edges: &[(usize, usize, f64)], order: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // order[v] lists neighbors of v in cyclic order
    let mut index = std::collections::HashMap::new();
    for (i, &(u, v, _)) in edges.iter().enumerate() {
        index.insert((u.min(v), u.max(v)), i);
    }
    (0..n)
        .map(|v| order[v].iter().map(|&u| index[&(u.min(v), u.max(v))]).collect())
        .collect()
}

/// `rows x cols` grid. Vertex `(r, c)` has id `r * cols + c`.
///
/// # Example
///
/// ```
/// use treecover::generate::{grid, Weights};
/// let inst = grid(3, 4, Weights::Unit, 0).unwrap();
/// assert_eq!(inst.graph.n(), 12);
/// assert_eq!(inst.graph.m(), 17);
/// ```
pub fn grid(rows: usize, cols: usize, weights: Weights, seed: u64) -> Result<PlanarInstance> {
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(Error::InvalidInput("grid needs at least two vertices".into()));
    }
    let mut rng = rng(seed);
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1), weights.sample(&mut rng)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c), weights.sample(&mut rng)));
            }
        }
    }
    let mut order = vec![Vec::new(); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let o = &mut order[id(r, c)];
            if c + 1 < cols {
                o.push(id(r, c + 1));
            }
            if r + 1 < rows {
                o.push(id(r + 1, c));
            }
            if c > 0 {
                o.push(id(r, c - 1));
            }
            if r > 0 {
                o.push(id(r - 1, c));
            }
        }
    }
    let rotation = build_rotation(rows * cols, &edges, &order);
    let graph = WeightedGraph::new(rows * cols, edges)?;
    let embedding = PlanarEmbedding::with_outer_by(&graph, rotation, |faces| {
        let best = faces.iter().map(|f| f.len()).max().unwrap_or(0);
        faces.iter().position(|f| f.len() == best).unwrap_or(0)
    })?;
    Ok(PlanarInstance { graph, embedding })
}

/// Concentric rings: `height` rings of `circumference` vertices. Ring 0 is
/// the outer face; vertex `(k, j)` has id `k * circumference + j`.
pub fn cylinder_grid(circumference: usize, height: usize, weights: Weights, seed: u64) -> Result<PlanarInstance> {
    if circumference < 3 || height == 0 {
        return Err(Error::InvalidInput("cylinder grid needs circumference >= 3 and height >= 1".into()));
    }
    let c = circumference;
    let mut rng = rng(seed);
    let id = |k: usize, j: usize| k * c + j;
    let mut edges = Vec::new();
    for k in 0..height {
        for j in 0..c {
            edges.push((id(k, j), id(k, (j + 1) % c), weights.sample(&mut rng)));
            if k + 1 < height {
                edges.push((id(k, j), id(k + 1, j), weights.sample(&mut rng)));
            }
        }
    }
    let n = c * height;
    let mut order = vec![Vec::new(); n];
    for k in 0..height {
        for j in 0..c {
            let o = &mut order[id(k, j)];
            if k > 0 {
                o.push(id(k - 1, j));
            }
            o.push(id(k, (j + 1) % c));
            if k + 1 < height {
                o.push(id(k + 1, j));
            }
            o.push(id(k, (j + c - 1) % c));
        }
    }
    let rotation = build_rotation(n, &edges, &order);
    let graph = WeightedGraph::new(n, edges)?;
    let embedding = PlanarEmbedding::with_outer_by(&graph, rotation, |faces| {
        faces
            .iter()
            .position(|f| f.iter().all(|&d| crate::embedding::dart_tail(&graph, d) < c))
            .unwrap_or(0)
    })?;
    Ok(PlanarInstance { graph, embedding })
}

/// Random planar graph: a triangulation grown by inserting each new vertex
/// into a uniformly random inner face, followed by deleting a `delete_frac`
/// fraction of non-bridge inner edges. The outer face is the initial
/// triangle side `0 -> 2 -> 1`.
pub fn random_triangulation(n: usize, delete_frac: f64, weights: Weights, seed: u64) -> Result<PlanarInstance> {
    if n < 3 {
        return Err(Error::InvalidInput("triangulation needs n >= 3".into()));
    }
    if !(0.0..=1.0).contains(&delete_frac) {
        return Err(Error::InvalidInput("delete fraction must lie in [0, 1]".into()));
    }
    let mut rng = rng(seed);
    // rot[v] is the cyclic neighbor list of v
    let mut rot: Vec<Vec<usize>> = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let insert_before = |list: &mut Vec<usize>, before: usize, x: usize| {
        let i = list.iter().position(|&y| y == before).expect("corner neighbor");
        list.insert(i, x);
    };
    for v in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[fi];
        insert_before(&mut rot[b], a, v);
        insert_before(&mut rot[c], b, v);
        insert_before(&mut rot[a], c, v);
        rot.push(vec![a, b, c]);
        faces[fi] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (v, l) in rot.iter().enumerate() {
        for &u in l {
            if v < u {
                pairs.push((v, u));
            }
        }
    }
    let protected = |p: &(usize, usize)| p.0 < 3 && p.1 < 3;
    let mut candidates: Vec<(usize, usize)> = pairs.iter().copied().filter(|p| !protected(p)).collect();
    candidates.shuffle(&mut rng);
    let target = (delete_frac * candidates.len() as f64).floor() as usize;
    let mut deleted = 0;
    for &(u, v) in &candidates {
        if deleted == target {
            break;
        }
        if is_bridge(&rot, u, v) {
            continue;
        }
        rot[u].retain(|&x| x != v);
        rot[v].retain(|&x| x != u);
        deleted += 1;
    }
    let mut edges = Vec::new();
    for (v, l) in rot.iter().enumerate() {
        let mut nb: Vec<usize> = l.iter().copied().filter(|&u| u > v).collect();
        nb.sort_unstable();
        for u in nb {
            edges.push((v, u, weights.sample(&mut rng)));
        }
    }
    let rotation = build_rotation(n, &edges, &rot);
    let graph = WeightedGraph::new(n, edges)?;
    let e02 = graph.edge_index(0, 2).expect("outer edge kept");
    let start = crate::embedding::dart_from(&graph, e02, 0);
    let embedding = PlanarEmbedding::with_outer_by(&graph, rotation, |faces| {
        faces.iter().position(|f| f.contains(&start)).unwrap_or(0)
    })?;
    Ok(PlanarInstance { graph, embedding })
}

fn is_bridge(rot: &[Vec<usize>], u: usize, v: usize) -> bool {
    let mut seen = vec![false; rot.len()];
    let mut stack = vec![u];
    seen[u] = true;
    while let Some(x) = stack.pop() {
        for &y in &rot[x] {
            if (x == u && y == v) || (x == v && y == u) || seen[y] {
                continue;
            }
            if y == v {
                return false;
            }
            seen[y] = true;
            stack.push(y);
        }
    }
    true
}

/// Series-parallel graph built as a random partial 2-tree, with its width-2
/// tree decomposition. Each new vertex is attached to both ends of a random
/// existing edge; afterwards a `delete_frac` fraction of non-bridge edges is
/// removed, which keeps the decomposition valid.
pub fn series_parallel(
    n: usize,
    delete_frac: f64,
    weights: Weights,
    seed: u64,
) -> Result<(WeightedGraph, TreeDecomposition)> {
    if n < 2 {
        return Err(Error::InvalidInput("series-parallel graph needs n >= 2".into()));
    }
    let mut rng = rng(seed);
    let mut pairs: Vec<(usize, usize)> = vec![(0, 1)];
    let mut bag_of_pair: Vec<usize> = vec![0];
    let mut bags = vec![vec![0, 1]];
    let mut tree = Vec::new();
    for v in 2..n {
        let i = rng.gen_range(0..pairs.len());
        let (a, b) = pairs[i];
        let bag = bags.len();
        bags.push(vec![a.min(b), a.max(b), v]);
        tree.push((bag_of_pair[i], bag));
        pairs.push((a, v));
        bag_of_pair.push(bag);
        pairs.push((b, v));
        bag_of_pair.push(bag);
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.shuffle(&mut rng);
    let target = (delete_frac * pairs.len() as f64).floor() as usize;
    let mut keep = vec![true; pairs.len()];
    let mut deleted = 0;
    for i in order {
        if deleted == target {
            break;
        }
        let (a, b) = pairs[i];
        if is_bridge(&adj, a, b) {
            continue;
        }
        adj[a].retain(|&x| x != b);
        adj[b].retain(|&x| x != a);
        keep[i] = false;
        deleted += 1;
    }
    let mut kept: Vec<(usize, usize)> = pairs
        .iter()
        .zip(&keep)
        .filter(|p| *p.1)
        .map(|(&(a, b), _)| (a.min(b), a.max(b)))
        .collect();
    kept.sort_unstable();
    let edges = kept.into_iter().map(|(a, b)| (a, b, weights.sample(&mut rng))).collect();
    let graph = WeightedGraph::new(n, edges)?;
    Ok((graph, TreeDecomposition { bags, edges: tree }))
}
