//! Tree decompositions: validation and the min-fill elimination heuristic.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Bags of vertices joined by tree edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the tree shape, vertex and edge coverage, and connectivity of
    /// the bags holding each vertex.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let nb = self.bags.len();
        if nb == 0 {
            return Err(Error::Invariant("decomposition has no bags".into()));
        }
        if self.edges.len() != nb - 1 {
            return Err(Error::Invariant("decomposition is not a tree".into()));
        }
        let adj = self.adjacency()?;
        let mut seen = vec![false; nb];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(b) = stack.pop() {
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invariant("decomposition tree is disconnected".into()));
        }
        let mut holders = vec![Vec::new(); g.n()];
        for (b, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    return Err(Error::Invariant(format!("bag {b} holds unknown vertex {v}")));
                }
                holders[v].push(b);
            }
        }
        for (v, hs) in holders.iter().enumerate() {
            if hs.is_empty() {
                return Err(Error::Invariant(format!("vertex {v} is in no bag")));
            }
            let inside: BTreeSet<usize> = hs.iter().copied().collect();
            let mut seen = BTreeSet::new();
            let mut stack = vec![hs[0]];
            seen.insert(hs[0]);
            while let Some(b) = stack.pop() {
                for &c in &adj[b] {
                    if inside.contains(&c) && seen.insert(c) {
                        stack.push(c);
                    }
                }
            }
            if seen.len() != inside.len() {
                return Err(Error::Invariant(format!("bags holding vertex {v} are not connected")));
            }
        }
        let sets: Vec<BTreeSet<usize>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        for e in g.edges() {
            if !holders[e.u].iter().any(|&b| sets[b].contains(&e.v)) {
                return Err(Error::Invariant(format!("edge {}-{} is in no bag", e.u, e.v)));
            }
        }
        Ok(())
    }

    pub fn adjacency(&self) -> Result<Vec<Vec<usize>>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a >= self.bags.len() || b >= self.bags.len() || a == b {
                return Err(Error::Invariant(format!("bad tree edge {a}-{b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(adj)
    }

    /// Parent of each bag when rooted at bag 0, and a top-down order.
    pub fn rooted(&self) -> Result<(Vec<Option<usize>>, Vec<usize>)> {
        let adj = self.adjacency()?;
        let mut parent = vec![None; self.bags.len()];
        let mut order = vec![0];
        let mut seen = vec![false; self.bags.len()];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let b = order[i];
            i += 1;
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = Some(b);
                    order.push(c);
                }
            }
        }
        Ok((parent, order))
    }
}

/// Min-fill elimination ordering turned into a decomposition. Ties go to the
/// smaller degree, then the smaller id.
pub fn min_fill(g: &WeightedGraph) -> TreeDecomposition {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().map(|p| p.0).collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = (usize::MAX, usize::MAX, usize::MAX);
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0;
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    if !adj[nb[i]].contains(&nb[j]) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, nb.len(), v);
            if key < best {
                best = key;
            }
        }
        let v = best.2;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        }
        for &u in &nb {
            adj[u].remove(&v);
        }
        alive[v] = false;
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        order.push((v, nb));
        bags.push(bag);
    }
    let mut pos = vec![0; n];
    for (i, (v, _)) in order.iter().enumerate() {
        pos[*v] = i;
    }
    let mut edges = Vec::new();
    for (i, (_, nb)) in order.iter().enumerate() {
        if let Some(j) = nb.iter().map(|&u| pos[u]).min() {
            edges.push((j.min(i), j.max(i)));
        } else if i + 1 < n {
            // isolated at elimination time: attach to the next bag
            edges.push((i, i + 1));
        }
    }
    edges.sort_unstable();
    TreeDecomposition { bags, edges }
}
