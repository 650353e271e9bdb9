//! Gridtrees and gridtree hierarchies of embedded planar graphs.
//!
//! A gridtree splits a host subgraph into columns arranged in a rooted tree.
//! Every column carries a spine, a shortest path that all of its vertices
//! stay close to. Vertices outside every column form leftover sets, one per
//! tree edge; the set of a column sits on the edge to its parent (the root
//! uses a virtual parent). Leftover components are recursed on to form the
//! hierarchy.

use crate::embedding::{FaceIndex, PlanarEmbedding};
use crate::error::{Error, Result};
use crate::graph::{components, mask, members, WeightedGraph};
use crate::sssp::{multi_source, shortest_path, path_length, TOL};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub level: usize,
    pub spine: Vec<usize>,
    pub vertices: Vec<usize>,
    /// Leftover set on the edge from this column to its parent.
    pub leftover: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gridtree {
    pub host: Vec<usize>,
    pub width: f64,
    /// Columns in breadth-first order; column 0 is the root.
    pub columns: Vec<Column>,
}

/// Where a vertex sits inside a gridtree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Outside,
    Column(usize),
    Leftover(usize),
}

/// An embedded graph with its face structure.
pub struct Planar<'a> {
    pub g: &'a WeightedGraph,
    pub faces: FaceIndex,
}

impl<'a> Planar<'a> {
    pub fn new(g: &'a WeightedGraph, emb: &PlanarEmbedding) -> Result<Self> {
        Ok(Self { g, faces: FaceIndex::new(g, emb)? })
    }

    /// Outer-face vertices of the subgraph induced by `scope`.
    pub fn external(&self, scope: &[bool]) -> Vec<bool> {
        self.faces.outer_face(self.g, scope).vertex_mask(self.g, scope)
    }
}

struct Pending {
    sub: Vec<usize>,
    spine: Vec<usize>,
    parent: Option<usize>,
    level: usize,
}

/// Recursive path selection. Returns the columns of the unexpanded tree:
/// each column is the `w`-neighborhood of its spine inside its subgraph.
pub fn select_paths(
    p: &Planar,
    host: &[usize],
    host_ext: &[bool],
    start: Vec<usize>,
    w: f64,
) -> Result<Vec<Column>> {
    let g = p.g;
    let mut cols: Vec<Column> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(Pending { sub: host.to_vec(), spine: start, parent: None, level: 0 });
    while let Some(Pending { sub, spine, parent, level }) = queue.pop_front() {
        let id = cols.len();
        if let Some(pa) = parent {
            cols[pa].children.push(id);
        }
        let sub_mask = mask(g.n(), &sub);
        let sources: Vec<(usize, usize)> = spine.iter().map(|&v| (v, 0)).collect();
        let ball = multi_source(g, &sources, Some(&sub_mask), Some(w));
        let near: Vec<bool> = (0..g.n()).map(|v| ball.reached(v)).collect();
        let rest: Vec<bool> = (0..g.n()).map(|v| sub_mask[v] && !near[v]).collect();
        let outer = p.faces.outer_face(g, &sub_mask);
        let mut leftover = Vec::new();
        for comp in components(g, Some(&rest)) {
            if !comp.iter().any(|&v| host_ext[v]) {
                leftover.extend(comp);
                continue;
            }
            let mut ys: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&y| g.neighbors(y).iter().any(|&(x, e)| near[x] && outer.edge_is_outer(e)))
                .collect();
            ys.sort_unstable();
            let child_spine = match ys.len() {
                1 => ys.clone(),
                2 => {
                    let cm = mask(g.n(), &comp);
                    shortest_path(g, ys[0], ys[1], Some(&cm))
                        .ok_or_else(|| Error::Invariant("spine endpoints disconnected".into()))?
                }
                k => {
                    return Err(Error::Invariant(format!(
                        "path selection found {k} attachment vertices {:?} for a component of size {} \
                         below column {id} (spine {:?})",
                        &ys[..ys.len().min(8)],
                        comp.len(),
                        &spine[..spine.len().min(8)]
                    )))
                }
            };
            queue.push_back(Pending { sub: comp, spine: child_spine, parent: Some(id), level: level + 1 });
        }
        leftover.sort_unstable();
        cols.push(Column {
            parent,
            children: Vec::new(),
            level,
            spine,
            vertices: members(&near),
            leftover,
        });
    }
    Ok(cols)
}

impl Gridtree {
    /// Builds the expanded gridtree of `host`. Starting from the smallest
    /// external vertex, path selection produces the columns; afterwards every
    /// leftover vertex within `w` of some column joins its closest column
    /// (ties by column order).
    pub fn build(p: &Planar, host: &[usize], host_ext: &[bool], w: f64) -> Result<Self> {
        let mut gt = Self::build_unexpanded(p, host, host_ext, w)?;
        gt.expand(p.g);
        Ok(gt)
    }

    /// Path selection only, without moving leftover vertices into columns.
    pub fn build_unexpanded(p: &Planar, host: &[usize], host_ext: &[bool], w: f64) -> Result<Self> {
        let start = host
            .iter()
            .copied()
            .find(|&v| host_ext[v])
            .ok_or_else(|| Error::Invariant("host has no external vertex".into()))?;
        let columns = select_paths(p, host, host_ext, vec![start], w)?;
        Ok(Self { host: host.to_vec(), width: w, columns })
    }

    fn expand(&mut self, g: &WeightedGraph) {
        let w = self.width;
        let columns = &mut self.columns;
        let host_mask = mask(g.n(), &self.host);
        let sources: Vec<(usize, usize)> = columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.vertices.iter().map(move |&v| (v, c)))
            .collect();
        let near = multi_source(g, &sources, Some(&host_mask), Some(w));
        let mut gained = vec![Vec::new(); columns.len()];
        for col in columns.iter_mut() {
            col.leftover.retain(|&v| {
                if near.reached(v) {
                    gained[near.label[v]].push(v);
                    false
                } else {
                    true
                }
            });
        }
        for (col, extra) in columns.iter_mut().zip(gained) {
            col.vertices.extend(extra);
            col.vertices.sort_unstable();
        }
    }

    pub fn parts(&self, n: usize) -> Vec<Part> {
        let mut part = vec![Part::Outside; n];
        for (c, col) in self.columns.iter().enumerate() {
            for &v in &col.vertices {
                part[v] = Part::Column(c);
            }
            for &v in &col.leftover {
                part[v] = Part::Leftover(c);
            }
        }
        part
    }

    /// Columns in the subtree of `c`, including `c`.
    pub fn subtree(&self, c: usize) -> Vec<usize> {
        let mut out = vec![c];
        let mut i = 0;
        while i < out.len() {
            out.extend(self.columns[out[i]].children.iter().copied());
            i += 1;
        }
        out
    }

    /// Mask of the vertices strictly below column `c`.
    pub fn below_mask(&self, n: usize, c: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for d in self.subtree(c).into_iter().skip(1) {
            for &v in self.columns[d].vertices.iter().chain(&self.columns[d].leftover) {
                m[v] = true;
            }
        }
        m
    }

    /// Mask of the subgraph of column `c`: the columns below it plus the
    /// leftover sets below or incident to it.
    pub fn sub_mask(&self, n: usize, c: usize) -> Vec<bool> {
        let mut m = self.below_mask(n, c);
        for &v in self.columns[c].vertices.iter().chain(&self.columns[c].leftover) {
            m[v] = true;
        }
        m
    }

    pub fn leftover_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.columns.iter().flat_map(|c| c.leftover.iter().copied()).collect();
        v.sort_unstable();
        v
    }
}

/// A node of the hierarchy: a host subgraph with its gridtree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyNode {
    pub parent: Option<usize>,
    pub layer: usize,
    pub host: Vec<usize>,
    /// Host vertices adjacent to a column of the parent gridtree (for the
    /// root: the outer face of the graph).
    pub outer: Vec<usize>,
    pub gridtree: Gridtree,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hierarchy {
    pub width: f64,
    pub delta: f64,
    pub nodes: Vec<HierarchyNode>,
}

impl Hierarchy {
    /// Builds the hierarchy by recursing on leftover components.
    pub fn build(g: &WeightedGraph, emb: &PlanarEmbedding, w: f64, delta: f64) -> Result<Self> {
        if !(w > 0.0) {
            return Err(Error::InvalidInput(format!("column width must be positive, got {w}")));
        }
        let p = Planar::new(g, emb)?;
        let n = g.n();
        let all: Vec<usize> = (0..n).collect();
        let mut nodes: Vec<HierarchyNode> = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back((all, emb.outer_vertices(g), None::<usize>, 0usize));
        while let Some((host, outer, parent, layer)) = queue.pop_front() {
            let id = nodes.len();
            if let Some(pa) = parent {
                nodes[pa].children.push(id);
            }
            let host_mask = mask(n, &host);
            let ext = p.external(&host_mask);
            let gridtree = Gridtree::build(&p, &host, &ext, w)?;
            let mut in_column = vec![false; n];
            for col in &gridtree.columns {
                for &v in &col.vertices {
                    in_column[v] = true;
                }
            }
            let left = mask(n, &gridtree.leftover_vertices());
            for comp in components(g, Some(&left)) {
                let child_outer: Vec<usize> = comp
                    .iter()
                    .copied()
                    .filter(|&v| g.neighbors(v).iter().any(|&(u, _)| in_column[u]))
                    .collect();
                queue.push_back((comp, child_outer, Some(id), layer + 1));
            }
            nodes.push(HierarchyNode { parent, layer, host, outer, gridtree, children: Vec::new() });
        }
        Ok(Self { width: w, delta, nodes })
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|x| x.layer + 1).max().unwrap_or(0)
    }

    pub fn column_count(&self) -> usize {
        self.nodes.iter().map(|x| x.gridtree.columns.len()).sum()
    }
}

/// Measurements from a successful gridtree check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridtreeReport {
    pub columns: usize,
    pub min_column_width: f64,
    pub max_spine_distance: f64,
}

/// Checks column adjacency, column width and column shortcut for one
/// gridtree. `tol` is the absolute slack for distance comparisons.
pub fn check_gridtree(g: &WeightedGraph, gt: &Gridtree, tol: f64) -> Result<GridtreeReport> {
    let n = g.n();
    let w = gt.width;
    let host = mask(n, &gt.host);
    let part = gt.parts(n);
    let mut covered = 0;
    for col in &gt.columns {
        covered += col.vertices.len() + col.leftover.len();
    }
    if covered != gt.host.len() || gt.host.iter().any(|&v| part[v] == Part::Outside) {
        return Err(Error::Invariant("gridtree parts do not partition the host".into()));
    }
    for e in g.edges() {
        if !host[e.u] || !host[e.v] {
            continue;
        }
        let ok = match (part[e.u], part[e.v]) {
            (a, b) if a == b => true,
            (Part::Column(a), Part::Column(b)) => {
                gt.columns[a].parent == Some(b) || gt.columns[b].parent == Some(a)
            }
            (Part::Column(c), Part::Leftover(x)) | (Part::Leftover(x), Part::Column(c)) => {
                c == x || gt.columns[x].parent == Some(c)
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Invariant(format!(
                "column adjacency violated by edge {}-{} ({:?}, {:?})",
                e.u, e.v, part[e.u], part[e.v]
            )));
        }
    }
    let mut report = GridtreeReport { columns: gt.columns.len(), min_column_width: f64::INFINITY, max_spine_distance: 0.0 };
    for (c, col) in gt.columns.iter().enumerate() {
        let below = gt.below_mask(n, c);
        let mine = mask(n, &col.vertices);
        let sub = gt.sub_mask(n, c);
        // width: the column together with the leftover set on its parent
        // edge forms a band; every path that enters the band from above must
        // travel at least w before it reaches anything below
        let band: Vec<bool> = (0..n).map(|v| mine[v] || part[v] == Part::Leftover(c)).collect();
        let above = |v: usize| host[v] && !below[v] && !band[v];
        let sources: Vec<(usize, usize)> = (0..n)
            .filter(|&a| band[a] && g.neighbors(a).iter().any(|&(x, _)| above(x)))
            .map(|a| (a, 0))
            .collect();
        if !sources.is_empty() {
            let scope: Vec<bool> = (0..n).map(|v| below[v] || band[v]).collect();
            let t = multi_source(g, &sources, Some(&scope), None);
            for v in (0..n).filter(|&v| below[v]) {
                report.min_column_width = report.min_column_width.min(t.dist[v]);
                if t.dist[v] < w - tol {
                    return Err(Error::Invariant(format!(
                        "column {c} has width {} < {w} (path to {v})",
                        t.dist[v]
                    )));
                }
            }
        }
        // shortcut: spine is a shortest path in the column subgraph and every
        // column vertex lies within 2w of it inside the column
        if col.spine.is_empty() || col.spine.iter().any(|&v| !mine[v]) {
            return Err(Error::Invariant(format!("spine of column {c} leaves the column")));
        }
        let len = path_length(g, &col.spine)
            .ok_or_else(|| Error::Invariant(format!("spine of column {c} is not a path")))?;
        let t = crate::sssp::dijkstra(g, col.spine[0], Some(&sub), None);
        let last = *col.spine.last().unwrap();
        if len > t.dist[last] + tol {
            return Err(Error::Invariant(format!(
                "spine of column {c} has length {len} but distance is {}",
                t.dist[last]
            )));
        }
        let sources: Vec<(usize, usize)> = col.spine.iter().map(|&v| (v, 0)).collect();
        let t = multi_source(g, &sources, Some(&mine), None);
        for &v in &col.vertices {
            report.max_spine_distance = report.max_spine_distance.max(t.dist[v]);
            if t.dist[v] > 2.0 * w + tol {
                return Err(Error::Invariant(format!(
                    "vertex {v} of column {c} is {} from its spine (limit {})",
                    t.dist[v],
                    2.0 * w
                )));
            }
        }
    }
    Ok(report)
}

/// Columns failing the width property read literally: a path from a vertex
/// above the column (leftover sets on its parent edge included) through the
/// column to a vertex below it shorter than `w`.
pub fn literal_width_violations(g: &WeightedGraph, gt: &Gridtree, tol: f64) -> usize {
    let n = g.n();
    let host = mask(n, &gt.host);
    (0..gt.columns.len())
        .filter(|&c| {
            let below = gt.below_mask(n, c);
            let mine = mask(n, &gt.columns[c].vertices);
            let above = |v: usize| host[v] && !below[v] && !mine[v];
            let sources: Vec<(usize, usize)> = (0..n)
                .filter(|&a| mine[a] && g.neighbors(a).iter().any(|&(x, _)| above(x)))
                .map(|a| (a, 0))
                .collect();
            if sources.is_empty() {
                return false;
            }
            let scope: Vec<bool> = (0..n).map(|v| below[v] || mine[v]).collect();
            let t = multi_source(g, &sources, Some(&scope), None);
            (0..n).any(|v| below[v] && t.dist[v] < gt.width - tol)
        })
        .count()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct HierarchyReport {
    pub nodes: usize,
    pub depth: usize,
    pub depth_bound: usize,
    pub columns: usize,
    pub min_column_width: f64,
    pub max_spine_distance: f64,
}

/// Checks every gridtree, the layer width property, the depth bound and the
/// layer separation of columns with `m` columns between them.
pub fn check_hierarchy(g: &WeightedGraph, h: &Hierarchy) -> Result<HierarchyReport> {
    let n = g.n();
    let tol = TOL * h.delta.max(1.0);
    let w = h.width;
    let mut rep = HierarchyReport {
        nodes: h.nodes.len(),
        depth: h.depth(),
        depth_bound: (h.delta / w).ceil() as usize + 1,
        columns: h.column_count(),
        min_column_width: f64::INFINITY,
        max_spine_distance: 0.0,
    };
    let mut seen = vec![0usize; n];
    for node in &h.nodes {
        if node.layer == 0 {
            for &v in &node.host {
                seen[v] += 1;
            }
        }
        let r = check_gridtree(g, &node.gridtree, tol)?;
        rep.min_column_width = rep.min_column_width.min(r.min_column_width);
        rep.max_spine_distance = rep.max_spine_distance.max(r.max_spine_distance);
        let host = mask(n, &node.host);
        let sources: Vec<(usize, usize)> = node.outer.iter().map(|&v| (v, 0)).collect();
        let t = multi_source(g, &sources, Some(&host), Some(w));
        let part = node.gridtree.parts(n);
        for v in t.reached_vertices() {
            if t.dist[v] < w - tol && !matches!(part[v], Part::Column(_)) {
                return Err(Error::Invariant(format!(
                    "layer width violated: vertex {v} is {} from an outer vertex but not in a column",
                    t.dist[v]
                )));
            }
        }
        let gt = &node.gridtree;
        for (c, col) in gt.columns.iter().enumerate() {
            let sources: Vec<(usize, usize)> = col.vertices.iter().map(|&v| (v, 0)).collect();
            let t = multi_source(g, &sources, Some(&host), None);
            // minimum distance to the subgraph of each descendant column
            let sub = gt.subtree(c);
            let mut best = vec![f64::INFINITY; gt.columns.len()];
            for &d in sub.iter().rev() {
                let own = gt.columns[d]
                    .vertices
                    .iter()
                    .chain(&gt.columns[d].leftover)
                    .map(|&v| t.dist[v])
                    .fold(f64::INFINITY, f64::min);
                let kids = gt.columns[d].children.iter().map(|&k| best[k]).fold(f64::INFINITY, f64::min);
                best[d] = own.min(kids);
            }
            for &d in &sub[1..] {
                let m = gt.columns[d].level - col.level - 1;
                if best[d] < m as f64 * w - tol {
                    return Err(Error::Invariant(format!(
                        "columns {c} and {d} are {} apart with {m} columns between",
                        best[d]
                    )));
                }
            }
        }
    }
    let mut layer_cover = vec![0usize; n];
    for node in &h.nodes {
        for col in &node.gridtree.columns {
            for &v in &col.vertices {
                layer_cover[v] += 1;
            }
        }
    }
    if layer_cover.iter().any(|&c| c != 1) {
        return Err(Error::Invariant("every vertex must lie in exactly one column of the hierarchy".into()));
    }
    if rep.depth > rep.depth_bound {
        return Err(Error::Invariant(format!("hierarchy depth {} exceeds {}", rep.depth, rep.depth_bound)));
    }
    Ok(rep)
}
