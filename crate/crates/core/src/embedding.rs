//! Combinatorial planar embeddings: rotation systems, face tracing and the
//! outer face of induced subgraphs.
//!
//! Dart `2e` runs from `edges[e].u` to `edges[e].v`, dart `2e + 1` runs back.
//! The face successor of dart `u -> v` is `v -> w` where `w` precedes `u` in
//! the rotation at `v`.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use serde::{Deserialize, Serialize};

pub fn dart_tail(g: &WeightedGraph, d: usize) -> usize {
    let e = g.edge(d / 2);
    if d % 2 == 0 {
        e.u
    } else {
        e.v
    }
}

pub fn dart_head(g: &WeightedGraph, d: usize) -> usize {
    dart_tail(g, d ^ 1)
}

/// Dart leaving `from` along edge `e`.
pub fn dart_from(g: &WeightedGraph, e: usize, from: usize) -> usize {
    if g.edge(e).u == from {
        2 * e
    } else {
        2 * e + 1
    }
}

/// Rotation system plus a designated outer face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarEmbedding {
    /// Cyclic order of incident edge indices at each vertex.
    pub rotation: Vec<Vec<usize>>,
    /// Darts of the outer face in traversal order.
    pub outer: Vec<usize>,
}

/// Faces of an embedded graph.
#[derive(Debug, Clone)]
pub struct Faces {
    pub face_of_dart: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
    pub outer: usize,
}

impl PlanarEmbedding {
    /// Validates the rotation against `g`, checks Euler's formula and that
    /// `outer` is exactly one traced face.
    pub fn new(g: &WeightedGraph, rotation: Vec<Vec<usize>>, outer: Vec<usize>) -> Result<Self> {
        let emb = Self { rotation, outer };
        emb.faces(g)?;
        Ok(emb)
    }

    /// Picks the outer face with `select` after tracing.
    pub fn with_outer_by(
        g: &WeightedGraph,
        rotation: Vec<Vec<usize>>,
        select: impl Fn(&[Vec<usize>]) -> usize,
    ) -> Result<Self> {
        let traced = trace(g, &rotation)?;
        let outer = if traced.is_empty() { Vec::new() } else { traced[select(&traced)].clone() };
        Self::new(g, rotation, outer)
    }

    fn position_table(&self, g: &WeightedGraph) -> Result<Vec<usize>> {
        if self.rotation.len() != g.n() {
            return Err(Error::Embedding("rotation has wrong vertex count".into()));
        }
        position_table(g, &self.rotation)
    }

    /// Traces all faces; fails unless V - E + F = 2 and the outer face matches.
    pub fn faces(&self, g: &WeightedGraph) -> Result<Faces> {
        self.position_table(g)?;
        let faces = trace(g, &self.rotation)?;
        let mut face_of_dart = vec![0; 2 * g.m()];
        for (f, darts) in faces.iter().enumerate() {
            for &d in darts {
                face_of_dart[d] = f;
            }
        }
        let nf = if g.m() == 0 { 1 } else { faces.len() };
        if g.n() as i64 - g.m() as i64 + nf as i64 != 2 {
            return Err(Error::Embedding(format!(
                "Euler check failed: V={} E={} F={}",
                g.n(),
                g.m(),
                faces.len()
            )));
        }
        let outer = if g.m() == 0 {
            0
        } else {
            let Some(&d0) = self.outer.first() else {
                return Err(Error::Embedding("empty outer face".into()));
            };
            if d0 >= face_of_dart.len() {
                return Err(Error::Embedding("outer dart out of range".into()));
            }
            let f = face_of_dart[d0];
            let mut a = faces[f].clone();
            let mut b = self.outer.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::Embedding("outer darts do not form a face".into()));
            }
            f
        };
        Ok(Faces { face_of_dart, faces, outer })
    }

    /// Vertices on the outer face, sorted.
    pub fn outer_vertices(&self, g: &WeightedGraph) -> Vec<usize> {
        if g.m() == 0 {
            return vec![0];
        }
        let mut v: Vec<usize> = self.outer.iter().map(|&d| dart_tail(g, d)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn position_table(g: &WeightedGraph, rotation: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut pos = vec![usize::MAX; 2 * g.m()];
    for (v, rot) in rotation.iter().enumerate() {
        if rot.len() != g.degree(v) {
            return Err(Error::Embedding(format!("rotation at {v} does not list every incident edge")));
        }
        for (i, &e) in rot.iter().enumerate() {
            if e >= g.m() || (g.edge(e).u != v && g.edge(e).v != v) {
                return Err(Error::Embedding(format!("rotation at {v} lists non-incident edge {e}")));
            }
            let d = dart_from(g, e, v);
            if pos[d] != usize::MAX {
                return Err(Error::Embedding(format!("edge {e} repeated at {v}")));
            }
            pos[d] = i;
        }
    }
    Ok(pos)
}

fn trace(g: &WeightedGraph, rotation: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let pos = position_table(g, rotation)?;
    let mut seen = vec![false; 2 * g.m()];
    let mut faces = Vec::new();
    for start in 0..2 * g.m() {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push(d);
            d = next_dart(g, rotation, &pos, d);
        }
        if d != start {
            return Err(Error::Embedding("face walk did not close".into()));
        }
        faces.push(face);
    }
    Ok(faces)
}

fn next_dart(g: &WeightedGraph, rotation: &[Vec<usize>], pos: &[usize], d: usize) -> usize {
    let v = dart_head(g, d);
    let rot = &rotation[v];
    let i = pos[d ^ 1];
    let e = rot[(i + rot.len() - 1) % rot.len()];
    dart_from(g, e, v)
}

/// Outer-face structure of induced subgraphs, derived by merging the faces of
/// the whole graph across deleted edges.
#[derive(Debug, Clone)]
pub struct FaceIndex {
    faces: Faces,
}

/// The outer face of one induced subgraph.
pub struct OuterFace<'a> {
    index: &'a FaceIndex,
    root: Vec<usize>,
    outer_root: usize,
}

impl FaceIndex {
    pub fn new(g: &WeightedGraph, emb: &PlanarEmbedding) -> Result<Self> {
        Ok(Self { faces: emb.faces(g)? })
    }

    pub fn faces(&self) -> &Faces {
        &self.faces
    }

    /// Merges faces across every edge with an endpoint outside `scope`.
    pub fn outer_face<'a>(&'a self, g: &WeightedGraph, scope: &[bool]) -> OuterFace<'a> {
        let nf = self.faces.faces.len();
        let mut parent: Vec<usize> = (0..nf).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (e, edge) in g.edges().iter().enumerate() {
            if scope[edge.u] && scope[edge.v] {
                continue;
            }
            let a = find(&mut parent, self.faces.face_of_dart[2 * e]);
            let b = find(&mut parent, self.faces.face_of_dart[2 * e + 1]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let root: Vec<usize> = (0..nf).map(|f| find(&mut parent, f)).collect();
        let outer_root = if nf == 0 { 0 } else { root[self.faces.outer] };
        OuterFace { index: self, root, outer_root }
    }
}

impl OuterFace<'_> {
    /// Whether either side of edge `e` lies in the outer face.
    pub fn edge_is_outer(&self, e: usize) -> bool {
        if self.root.is_empty() {
            return true;
        }
        let f = &self.index.faces.face_of_dart;
        self.root[f[2 * e]] == self.outer_root || self.root[f[2 * e + 1]] == self.outer_root
    }

    /// Whether `v` has a corner in the outer face.
    pub fn vertex_is_outer(&self, g: &WeightedGraph, v: usize) -> bool {
        if self.root.is_empty() {
            return true;
        }
        let f = &self.index.faces.face_of_dart;
        g.neighbors(v)
            .iter()
            .any(|&(_, e)| self.root[f[dart_from(g, e, v)]] == self.outer_root)
    }

    /// Mask of outer-face vertices within `scope`.
    pub fn vertex_mask(&self, g: &WeightedGraph, scope: &[bool]) -> Vec<bool> {
        (0..g.n()).map(|v| scope[v] && self.vertex_is_outer(g, v)).collect()
    }
}

/// Induced subgraph on `verts` (sorted) with the inherited embedding. Returns
/// the subgraph, its embedding and the local-to-global vertex map.
pub fn induced(
    g: &WeightedGraph,
    emb: &PlanarEmbedding,
    index: &FaceIndex,
    verts: &[usize],
) -> Result<(WeightedGraph, PlanarEmbedding, Vec<usize>)> {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    let mut new_id = vec![usize::MAX; g.m()];
    let mut old_of = Vec::new();
    for (e, ed) in g.edges().iter().enumerate() {
        if local[ed.u] != usize::MAX && local[ed.v] != usize::MAX {
            new_id[e] = edges.len();
            old_of.push(e);
            edges.push((local[ed.u], local[ed.v], ed.w));
        }
    }
    let sub = WeightedGraph::new(verts.len(), edges)?;
    let rotation: Vec<Vec<usize>> = verts
        .iter()
        .map(|&v| emb.rotation[v].iter().filter(|&&e| new_id[e] != usize::MAX).map(|&e| new_id[e]).collect())
        .collect();
    let scope = crate::graph::mask(g.n(), verts);
    let of = index.outer_face(g, &scope);
    let is_outer_dart = |d: usize| {
        let old = dart_from(g, old_of[d / 2], verts[dart_tail(&sub, d)]);
        of.root[of.index.faces.face_of_dart[old]] == of.outer_root
    };
    let sub_emb = PlanarEmbedding::with_outer_by(&sub, rotation, |faces| {
        faces.iter().position(|f| f.iter().any(|&d| is_outer_dart(d))).unwrap_or(0)
    })?;
    Ok((sub, sub_emb, verts.to_vec()))
}
