//! Multiplicative tree covers from additive ones.
//!
//! A family of nested hierarchical partitions is built by random ball
//! carving and certified: every pair of points shares a cluster whose scale
//! is within a measured factor `rho` of their distance. Every hierarchy gets
//! nets, every cluster gets an additive cover of its child net points, and
//! the covers of all scales are glued along shared net points into trees
//! holding each point once.

use crate::embedding::{induced, FaceIndex, PlanarEmbedding};
use crate::error::{Error, Result};
use crate::forest_cover::{cover_hierarchy, forests_to_trees, TreeCover};
use crate::generate::rng;
use crate::graph::WeightedGraph;
use crate::partition::build_partition;
use crate::sssp::{diameter, dijkstra, ExactOracle, TOL};
use crate::tree::{LcaIndex, RootedTree, TreeKind, TreeSetIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// Scale ratio of the base hierarchies.
pub const MU_HAT: f64 = 4.0;

/// One partition of a hierarchy; `radius` bounds cluster diameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub radius: f64,
    pub cluster_of: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
}

impl Level {
    fn from_assignment(radius: f64, cluster_of: Vec<usize>) -> Self {
        let k = cluster_of.iter().max().map_or(0, |&c| c + 1);
        let mut clusters = vec![Vec::new(); k];
        for (v, &c) in cluster_of.iter().enumerate() {
            clusters[c].push(v);
        }
        Self { radius, cluster_of, clusters }
    }

    fn singletons(n: usize) -> Self {
        Self::from_assignment(0.0, (0..n).collect())
    }

    fn whole(n: usize, radius: f64) -> Self {
        Self::from_assignment(radius, vec![0; n])
    }
}

/// Nested partitions from singletons up to the whole point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchicalPartition {
    pub levels: Vec<Level>,
}

impl HierarchicalPartition {
    /// Checks singletons at the bottom, one cluster at the top, nesting and
    /// cluster diameters.
    pub fn validate(&self, oracle: &ExactOracle) -> Result<()> {
        let n = oracle.n();
        let tol = TOL * oracle.diameter().max(1.0);
        let (first, last) = (&self.levels[0], self.levels.last().unwrap());
        if first.clusters.len() != n || last.clusters.len() != 1 {
            return Err(Error::Invariant("hierarchy must run from singletons to one cluster".into()));
        }
        for (l, w) in self.levels.windows(2).enumerate() {
            let mut parent = vec![usize::MAX; w[0].clusters.len()];
            for v in 0..n {
                let (a, b) = (w[0].cluster_of[v], w[1].cluster_of[v]);
                if parent[a] == usize::MAX {
                    parent[a] = b;
                } else if parent[a] != b {
                    return Err(Error::Invariant(format!("level {} splits a cluster of level {l}", l + 1)));
                }
            }
        }
        for (l, level) in self.levels.iter().enumerate() {
            for c in &level.clusters {
                for &x in c {
                    for &y in c {
                        if oracle.dist(x, y) > level.radius + tol {
                            return Err(Error::Invariant(format!("level {l} cluster exceeds its diameter bound")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Base hierarchies, one level per scale `0..=imax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hpf {
    /// Minimum pairwise distance; scale `i` has radius `unit * MU_HAT^i`.
    pub unit: f64,
    pub imax: usize,
    pub rho_hat: f64,
    pub hierarchies: Vec<HierarchicalPartition>,
}

fn min_distance(g: &WeightedGraph) -> Result<f64> {
    let m = g.edges().iter().map(|e| e.w).fold(f64::INFINITY, f64::min);
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidInput("multiplicative covers need positive edge weights".into()));
    }
    Ok(m)
}

/// Groups whole child clusters around random centers with a random radius.
fn carve(oracle: &ExactOracle, child: &Level, radius: f64, rng: &mut impl Rng) -> Level {
    let n = oracle.n();
    let r = rng.gen_range(radius / 4.0..=radius / 2.0);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut owner = vec![usize::MAX; child.clusters.len()];
    let mut left = child.clusters.len();
    let mut next = 0;
    for c in order {
        if left == 0 {
            break;
        }
        let mut took = false;
        for (k, members) in child.clusters.iter().enumerate() {
            if owner[k] == usize::MAX && members.iter().all(|&v| oracle.dist(c, v) <= r) {
                owner[k] = next;
                left -= 1;
                took = true;
            }
        }
        if took {
            next += 1;
        }
    }
    Level::from_assignment(radius, (0..n).map(|v| owner[child.cluster_of[v]]).collect())
}

fn hierarchy(oracle: &ExactOracle, unit: f64, imax: usize, seed: u64) -> HierarchicalPartition {
    let n = oracle.n();
    let mut rng = rng(seed);
    let mut levels = vec![Level::singletons(n)];
    for i in 1..imax {
        let l = carve(oracle, levels.last().unwrap(), unit * MU_HAT.powi(i as i32), &mut rng);
        levels.push(l);
    }
    levels.push(Level::whole(n, unit * MU_HAT.powi(imax as i32)));
    HierarchicalPartition { levels }
}

/// Whether the ball of radius `level.radius / rho_hat` around `x` stays in
/// the cluster of `x`.
fn padded(oracle: &ExactOracle, level: &Level, rho_hat: f64, x: usize) -> bool {
    let r = level.radius / rho_hat;
    let c = level.cluster_of[x];
    (0..oracle.n()).all(|y| oracle.dist(x, y) > r || level.cluster_of[y] == c)
}

/// Adds random hierarchies until every point is padded at every scale in
/// one of them, with at most `budget` hierarchies.
pub fn build_hpf(g: &WeightedGraph, oracle: &ExactOracle, rho_hat: f64, budget: usize, seed: u64) -> Result<Hpf> {
    let n = oracle.n();
    let unit = min_distance(g)?;
    let phi = oracle.diameter() / unit;
    let imax = (phi.ln() / MU_HAT.ln() - 1e-12).ceil().max(1.0) as usize;
    let mut open: Vec<(usize, usize)> = (1..imax).flat_map(|i| (0..n).map(move |x| (x, i))).collect();
    let mut hierarchies = Vec::new();
    let batch = rayon::current_num_threads().max(1);
    while !open.is_empty() && hierarchies.len() < budget {
        let start = hierarchies.len();
        let count = batch.min(budget - start);
        let fresh: Vec<HierarchicalPartition> = (start..start + count)
            .into_par_iter()
            .map(|j| hierarchy(oracle, unit, imax, seed ^ (j as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
            .collect();
        for h in fresh {
            if open.is_empty() {
                break;
            }
            open.retain(|&(x, i)| !padded(oracle, &h.levels[i], rho_hat, x));
            hierarchies.push(h);
        }
    }
    if !open.is_empty() {
        return Err(Error::Construction(format!(
            "{} (point, scale) pairs still unpadded after {budget} hierarchies at rho_hat {rho_hat}",
            open.len()
        )));
    }
    if hierarchies.is_empty() {
        hierarchies.push(hierarchy(oracle, unit, imax, seed));
    }
    Ok(Hpf { unit, imax, rho_hat, hierarchies })
}

/// Hierarchies whose consecutive scales differ by at least `mu`, with the
/// measured pairwise factor `rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hppf {
    pub kappa: usize,
    pub mu: f64,
    pub rho: f64,
    pub hierarchies: Vec<HierarchicalPartition>,
}

/// Splits every base hierarchy by scale residue modulo
/// `kappa = ceil(log_MU_HAT(1/eps))` and certifies every pair.
pub fn hpf_to_hppf(hpf: &Hpf, oracle: &ExactOracle, eps: f64) -> Result<Hppf> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {eps}")));
    }
    let n = oracle.n();
    let kappa = ((1.0 / eps).ln() / MU_HAT.ln() - 1e-12).ceil().max(1.0) as usize;
    let mut hierarchies = Vec::new();
    for h in &hpf.hierarchies {
        for t in 0..kappa {
            let mut levels = vec![h.levels[0].clone()];
            for i in 1..hpf.imax {
                if i % kappa == t {
                    levels.push(h.levels[i].clone());
                }
            }
            let top = (hpf.imax..).find(|i| i % kappa == t).unwrap();
            levels.push(Level::whole(n, hpf.unit * MU_HAT.powi(top as i32)));
            hierarchies.push(HierarchicalPartition { levels });
        }
    }
    let rho = pairwise_rho(oracle, &hierarchies)?;
    Ok(Hppf { kappa, mu: MU_HAT.powi(kappa as i32), rho, hierarchies })
}

/// Largest over pairs of the smallest `radius / distance` over levels that
/// hold the pair in one cluster.
pub fn pairwise_rho(oracle: &ExactOracle, hierarchies: &[HierarchicalPartition]) -> Result<f64> {
    let n = oracle.n();
    (0..n)
        .into_par_iter()
        .map(|x| {
            let mut worst: f64 = 0.0;
            for y in x + 1..n {
                let d = oracle.dist(x, y);
                let best = hierarchies
                    .iter()
                    .flat_map(|h| h.levels.iter().skip(1))
                    .filter(|l| l.cluster_of[x] == l.cluster_of[y])
                    .map(|l| l.radius / d)
                    .fold(f64::INFINITY, f64::min);
                if !best.is_finite() {
                    return Err(Error::Construction(format!("pair ({x}, {y}) has no certificate")));
                }
                worst = worst.max(best);
            }
            Ok(worst)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Nets of one hierarchy and every point's ancestor per level.
#[derive(Debug, Clone, PartialEq)]
pub struct NetHierarchy {
    pub nets: Vec<Vec<usize>>,
    /// Net point of each cluster, per level.
    pub net_of: Vec<Vec<usize>>,
}

impl NetHierarchy {
    pub fn ancestor(&self, hp: &HierarchicalPartition, level: usize, x: usize) -> usize {
        self.net_of[level][hp.levels[level].cluster_of[x]]
    }
}

/// Top-down nets: a cluster keeps the net point of the level above if it
/// holds one, otherwise its smallest point.
pub fn build_nets(hp: &HierarchicalPartition) -> Result<NetHierarchy> {
    let top = hp.levels.len() - 1;
    let mut net_of = vec![Vec::new(); top + 1];
    net_of[top] = vec![hp.levels[top].clusters[0][0]];
    for l in (0..top).rev() {
        let level = &hp.levels[l];
        let mut pick = vec![usize::MAX; level.clusters.len()];
        for &q in &net_of[l + 1] {
            let c = level.cluster_of[q];
            if pick[c] != usize::MAX {
                return Err(Error::Invariant(format!("level {l} cluster holds two net points")));
            }
            pick[c] = q;
        }
        for (c, p) in pick.iter_mut().enumerate() {
            if *p == usize::MAX {
                *p = level.clusters[c][0];
            }
        }
        net_of[l] = pick;
    }
    let nets = net_of
        .iter()
        .map(|v| {
            let mut s = v.clone();
            s.sort_unstable();
            s
        })
        .collect();
    Ok(NetHierarchy { nets, net_of })
}

/// Builds additive covers of subsets of a planar graph: the subgraph spanned
/// by shortest paths between the points is covered, and every vertex that
/// is not one of the points becomes a Steiner node.
pub struct PlanarAdditive<'a> {
    g: &'a WeightedGraph,
    emb: &'a PlanarEmbedding,
    index: FaceIndex,
    eps: f64,
}

impl<'a> PlanarAdditive<'a> {
    pub fn new(g: &'a WeightedGraph, emb: &'a PlanarEmbedding, eps: f64) -> Result<Self> {
        Ok(Self { g, emb, index: FaceIndex::new(g, emb)?, eps })
    }

    /// Trees over `points` (global ids) plus Steiner nodes with ids `>= n`.
    /// Trees need not contain every point.
    pub fn build(&self, points: &[usize]) -> Result<Vec<RootedTree>> {
        let n = self.g.n();
        if points.len() == 1 {
            return Ok(vec![RootedTree::singleton(TreeKind::Spanning, points[0])]);
        }
        let mut z = Vec::new();
        for (i, &y) in points.iter().enumerate() {
            let t = dijkstra(self.g, y, None, None);
            for &x in &points[i + 1..] {
                z.extend(t.path_to(x));
            }
        }
        z.sort_unstable();
        z.dedup();
        let (sub, sub_emb, map) = induced(self.g, self.emb, &self.index, &z)?;
        let delta = diameter(&sub, true);
        let sp = build_partition(&sub, &sub_emb, self.eps, 0.125, delta)?;
        let fc = cover_hierarchy(&sub, &sp.hierarchy, &sp.partition)?;
        let tc = forests_to_trees(&fc, sub.n());
        let keep: HashSet<usize> = points.iter().copied().collect();
        let id = |v: usize| {
            if v < sub.n() && keep.contains(&map[v]) {
                map[v]
            } else {
                n + v
            }
        };
        tc.trees
            .iter()
            .map(|t| {
                let edges: Vec<(usize, usize, f64)> = t.edges().map(|(p, v, w)| (id(v), id(p), w)).collect();
                RootedTree::from_edges(TreeKind::Steiner, id(t.root()), &edges)
            })
            .collect()
    }
}

/// Per-cluster covers of one hierarchy, indexed `[level][cluster]`; level 0
/// is empty.
pub type ClusterCovers = Vec<Vec<Vec<RootedTree>>>;

/// Joins, for every `t < count`, the `t`-th tree of every cluster cover
/// (cycling through shorter covers) into one tree. Each point appears once;
/// Steiner ids are renumbered from `n`.
pub fn glue_trees(
    n: usize,
    hp: &HierarchicalPartition,
    nets: &NetHierarchy,
    covers: &ClusterCovers,
    count: usize,
) -> Result<Vec<RootedTree>> {
    let top = hp.levels.len() - 1;
    let root = nets.net_of[top][0];
    (0..count)
        .map(|t| {
            let mut edges = Vec::new();
            let mut next = n;
            for level in covers.iter().skip(1) {
                for cover in level {
                    if cover.is_empty() {
                        return Err(Error::Invariant("cluster without a cover".into()));
                    }
                    let tree = &cover[t % cover.len()];
                    let mut fresh: HashMap<usize, usize> = HashMap::new();
                    let mut id = |v: usize| {
                        if v < n {
                            v
                        } else {
                            *fresh.entry(v).or_insert_with(|| {
                                next += 1;
                                next - 1
                            })
                        }
                    };
                    for (p, v, w) in tree.edges() {
                        let (p, v) = (id(p), id(v));
                        edges.push((v, p, w));
                    }
                }
            }
            let tree = RootedTree::from_edges(TreeKind::Steiner, root, &edges)?;
            let distinct: HashSet<usize> = tree.vertices.iter().copied().collect();
            if distinct.len() != tree.len() || (0..n).any(|v| !distinct.contains(&v)) {
                return Err(Error::Invariant(format!("glued tree {t} is not a tree on all points")));
            }
            Ok(tree)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultParams {
    pub eps: f64,
    /// Accuracy handed to the additive builder.
    pub eps_add: f64,
    pub rho_hat: f64,
    pub budget: usize,
    pub seed: u64,
}

impl MultParams {
    pub fn new(eps: f64, seed: u64) -> Self {
        Self { eps, eps_add: eps, rho_hat: 4.0, budget: 256, seed }
    }
}

/// Result of the reduction with the constants measured along the way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultCover {
    pub cover: TreeCover,
    pub hppf: Hppf,
    /// Largest `(min tree distance - distance) / radius` over cluster covers.
    pub a: f64,
    /// Largest root-to-point tree distance over radius in cluster covers.
    pub c0: f64,
    pub eps: f64,
}

impl MultCover {
    /// Stretch constant: every pair is within `(1 + c * eps)` of its distance.
    pub fn c(&self) -> f64 {
        let (rho, mu) = (self.hppf.rho, self.hppf.mu);
        rho * (2.0 / mu + self.a + 2.0 * self.c0 / (mu - 1.0)) / self.eps
    }
}

fn complete_and_root(
    oracle: &ExactOracle,
    trees: Vec<RootedTree>,
    points: &[usize],
    root: usize,
) -> Result<Vec<RootedTree>> {
    trees
        .into_iter()
        .map(|t| {
            let have: HashSet<usize> = t.vertices.iter().copied().collect();
            let mut edges: Vec<(usize, usize, f64)> = t.edges().map(|(p, v, w)| (v, p, w)).collect();
            for &y in points.iter().filter(|y| !have.contains(y)) {
                let w = points.iter().map(|&b| oracle.dist(y, b)).fold(0.0, f64::max);
                edges.push((y, t.root(), w));
            }
            RootedTree::from_edges(t.kind, t.root(), &edges)?.rerooted(root)
        })
        .collect()
}

/// Full reduction for a planar graph: hierarchies, nets, per-cluster
/// additive covers and gluing.
pub fn multiplicative_cover(g: &WeightedGraph, emb: &PlanarEmbedding, params: MultParams) -> Result<MultCover> {
    let oracle = ExactOracle::new(g)?;
    let hpf = build_hpf(g, &oracle, params.rho_hat, params.budget, params.seed)?;
    let hppf = hpf_to_hppf(&hpf, &oracle, params.eps)?;
    let builder = PlanarAdditive::new(g, emb, params.eps_add)?;
    let n = g.n();
    let per: Vec<(Vec<RootedTree>, f64, f64)> = hppf
        .hierarchies
        .par_iter()
        .map(|hp| {
            let nets = build_nets(hp)?;
            let mut covers: ClusterCovers = vec![Vec::new()];
            let (mut a, mut c0) = (0.0f64, 0.0f64);
            for l in 1..hp.levels.len() {
                let level = &hp.levels[l];
                let mut row = Vec::with_capacity(level.clusters.len());
                for (c, members) in level.clusters.iter().enumerate() {
                    let points: Vec<usize> =
                        members.iter().copied().filter(|&x| nets.net_of[l - 1][hp.levels[l - 1].cluster_of[x]] == x).collect();
                    let root = nets.net_of[l][c];
                    let trees = complete_and_root(&oracle, builder.build(&points)?, &points, root)?;
                    let idx: Vec<LcaIndex> = trees.iter().map(LcaIndex::new).collect();
                    for (i, &x) in points.iter().enumerate() {
                        for &y in &points[i + 1..] {
                            let best = idx.iter().map(|t| t.distance(x, y).unwrap()).fold(f64::INFINITY, f64::min);
                            a = a.max((best - oracle.dist(x, y)) / level.radius);
                        }
                        for t in &idx {
                            c0 = c0.max(t.distance(root, x).unwrap() / level.radius);
                        }
                    }
                    row.push(trees);
                }
                covers.push(row);
            }
            let count = covers.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
            Ok((glue_trees(n, hp, &nets, &covers, count)?, a, c0))
        })
        .collect::<Result<_>>()?;
    let (mut a, mut c0) = (0.0f64, 0.0f64);
    let mut trees = Vec::new();
    for (t, x, y) in per {
        trees.extend(t);
        a = a.max(x);
        c0 = c0.max(y);
    }
    Ok(MultCover { cover: TreeCover { n, trees }, hppf, a, c0, eps: params.eps })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MultReport {
    pub trees: usize,
    pub pairs: usize,
    pub max_stretch: f64,
    pub c: f64,
    pub stretch_bound: f64,
    /// Smallest tree distance over graph distance across all trees and pairs.
    pub min_ratio: f64,
}

/// Checks that every tree dominates the graph metric and that the best tree
/// for every pair is within `1 + c * eps`.
pub fn verify_mult(oracle: &ExactOracle, m: &MultCover) -> Result<MultReport> {
    let n = oracle.n();
    let trees = &m.cover.trees;
    let tol = TOL * oracle.diameter().max(1.0);
    let min_ratio = trees
        .par_iter()
        .map(|t| {
            let idx = LcaIndex::new(t);
            let pts: Vec<usize> = t.vertices.iter().copied().filter(|&v| v < n).collect();
            let mut lo = f64::INFINITY;
            for (i, &x) in pts.iter().enumerate() {
                for &y in &pts[i + 1..] {
                    let d = oracle.dist(x, y);
                    let dt = idx.distance(x, y).unwrap();
                    if dt < d - tol {
                        return Err(Error::Invariant(format!("tree distance {dt} undercuts {d} for ({x}, {y})")));
                    }
                    lo = lo.min(dt / d);
                }
            }
            Ok(lo)
        })
        .try_reduce(|| f64::INFINITY, |a, b| Ok(a.min(b)))?;
    let index = TreeSetIndex::new(n, trees);
    let max_stretch = (0..n)
        .into_par_iter()
        .map(|x| (x + 1..n).map(|y| index.min_distance(x, y).0 / oracle.dist(x, y)).fold(1.0, f64::max))
        .reduce(|| 1.0, f64::max);
    let c = m.c();
    let bound = 1.0 + c * m.eps;
    if max_stretch > bound + TOL {
        return Err(Error::Invariant(format!("stretch {max_stretch} exceeds 1 + c * eps = {bound}")));
    }
    Ok(MultReport { trees: trees.len(), pairs: n * (n - 1) / 2, max_stretch, c, stretch_bound: bound, min_ratio })
}
