use proptest::prelude::*;
use treecover::forest_cover::TreeCover;
use treecover::generate::{grid, random_triangulation, Weights};
use treecover::mult::{multiplicative_cover, MultParams};
use treecover::oracle::{build_emulator, build_oracle, prune_tree};
use treecover::sssp::{dijkstra, ExactOracle};
use treecover::tree::{LcaIndex, RootedTree, TreeKind};
use treecover::WeightedGraph;

fn path_tree(n: usize) -> RootedTree {
    let edges: Vec<_> = (1..n).map(|v| (v, v - 1, v as f64)).collect();
    RootedTree::from_edges(TreeKind::Spanning, 0, &edges).unwrap()
}

/// Tree distance by walking the tree as a graph.
fn tree_dist(t: &RootedTree, u: usize, v: usize) -> Option<f64> {
    let ids: Vec<usize> = t.vertices.clone();
    let (a, b) = (ids.iter().position(|&x| x == u)?, ids.iter().position(|&x| x == v)?);
    let edges = (1..t.len()).map(|i| (t.parent[i].unwrap(), i, t.weight[i])).collect();
    let g = WeightedGraph::new(t.len(), edges).unwrap();
    Some(dijkstra(&g, a, None, None).dist[b])
}

#[test]
fn path_tree_is_exact() {
    let cover = TreeCover { n: 6, trees: vec![path_tree(6)] };
    let o = build_oracle(&cover).unwrap();
    for u in 0..6 {
        for v in 0..6 {
            let want: usize = (u.min(v) + 1..=u.max(v)).sum();
            assert_eq!(o.query(u, v).unwrap(), want as f64);
        }
    }
    assert_eq!(o.query_counted(3, 3).unwrap(), (0.0, 0));
    assert!(o.query(0, 6).is_err());
}

#[test]
fn uncovered_vertex_is_rejected() {
    let cover = TreeCover { n: 4, trees: vec![path_tree(3)] };
    assert!(build_oracle(&cover).is_err());
}

#[test]
fn two_vertex_graph() {
    let t = RootedTree::from_edges(TreeKind::Spanning, 0, &[(1, 0, 2.5)]).unwrap();
    let o = build_oracle(&TreeCover { n: 2, trees: vec![t] }).unwrap();
    assert_eq!(o.query(0, 1).unwrap(), 2.5);
}

#[test]
fn index_size_is_linear() {
    let trees: Vec<_> = (2..8).map(path_tree).collect();
    let total: usize = trees.iter().map(|t| t.len()).sum();
    let o = build_oracle(&TreeCover { n: 7, trees }).unwrap();
    assert_eq!(o.index_size(), 2 * total - 6);
}

#[test]
fn queries_on_multiplicative_covers() {
    for (inst, eps) in [
        (grid(6, 6, Weights::Uniform(1.0, 3.0), 4).unwrap(), 0.5),
        (random_triangulation(60, 0.3, Weights::Uniform(1.0, 2.0), 5).unwrap(), 0.25),
    ] {
        let g = &inst.graph;
        let exact = ExactOracle::new(g).unwrap();
        let m = multiplicative_cover(g, &inst.embedding, MultParams::new(eps, 7)).unwrap();
        let o = build_oracle(&m.cover).unwrap();
        let bound = 1.0 + m.c() * eps;
        let tol = 1e-9 * exact.diameter();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let (q, lookups) = o.query_counted(u, v).unwrap();
                let brute = m.cover.trees.iter().filter_map(|t| tree_dist(t, u, v)).fold(f64::INFINITY, f64::min);
                assert!((q - brute).abs() <= tol, "({u}, {v}): {q} vs {brute}");
                let d = exact.dist(u, v);
                assert!(q >= d - tol && q <= bound * d + tol);
                assert!(lookups <= o.tree_count());
            }
        }
    }
}

#[test]
fn two_leaves_of_a_path_become_one_edge() {
    let p = prune_tree(&path_tree(5), |v| v == 0 || v == 4).unwrap().unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 4, 10.0)]);
}

#[test]
fn all_terminals_prune_nothing() {
    let t = RootedTree::from_edges(TreeKind::Spanning, 0, &[(1, 0, 1.0), (2, 0, 2.0), (3, 1, 1.5)]).unwrap();
    let p = prune_tree(&t, |_| true).unwrap().unwrap();
    assert_eq!(p.len(), t.len());
    let mut a: Vec<_> = t.edges().collect();
    let mut b: Vec<_> = p.edges().collect();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    assert_eq!(a, b);
}

#[test]
fn emulator_on_multiplicative_cover() {
    let inst = grid(6, 6, Weights::Uniform(1.0, 3.0), 4).unwrap();
    let g = &inst.graph;
    let exact = ExactOracle::new(g).unwrap();
    let m = multiplicative_cover(g, &inst.embedding, MultParams::new(0.5, 7)).unwrap();
    let o = build_oracle(&m.cover).unwrap();
    let terminals = vec![0, 5, 14, 21, 30, 35];
    let e = build_emulator(&m.cover, &terminals).unwrap();
    assert!(e.graph.n() <= (2 * terminals.len() - 1) * m.cover.trees.len());
    let tol = 1e-9 * exact.diameter();
    for (i, &s) in terminals.iter().enumerate() {
        let sp = dijkstra(&e.graph, i, None, None);
        for (j, &t) in terminals.iter().enumerate() {
            let d = sp.dist[j];
            assert!(d >= exact.dist(s, t) - tol && d <= o.query(s, t).unwrap() + tol);
        }
    }
}

fn random_tree(n: usize, seed: u64) -> RootedTree {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (x >> 33) as usize
    };
    let edges: Vec<_> = (1..n).map(|v| (v, next() % v, (next() % 5) as f64)).collect();
    RootedTree::from_edges(TreeKind::Spanning, 0, &edges).unwrap()
}

proptest! {
    #[test]
    fn pruning_keeps_terminal_distances(n in 1usize..40, seed in any::<u64>(), mask in any::<u64>()) {
        let t = random_tree(n, seed);
        let term = |v: usize| mask >> (v % 64) & 1 == 1;
        let s: Vec<usize> = (0..n).filter(|&v| term(v)).collect();
        match prune_tree(&t, term).unwrap() {
            None => prop_assert!(s.is_empty()),
            Some(p) => {
                prop_assert!(p.len() < 2 * s.len());
                let (a, b) = (LcaIndex::new(&t), LcaIndex::new(&p));
                for &u in &s {
                    for &v in &s {
                        prop_assert_eq!(a.distance(u, v), b.distance(u, v));
                    }
                }
            }
        }
    }
}
