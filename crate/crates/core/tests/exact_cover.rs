use proptest::prelude::*;
use std::collections::HashSet;
use treecover::exact_cover::{
    check_bfs_forest, exact_cover, partition_to_cover, preserves, root_expansion, star_forest_base, star_transform,
    verify_exact, BfsForest,
};
use treecover::generate::{grid, random_triangulation, Weights};
use treecover::partition::{build_partition, Cluster, Partition};
use treecover::sssp::{diameter, dijkstra, ExactOracle};
use treecover::tree::{RootedTree, TreeKind, TreeSetIndex};
use treecover::WeightedGraph;

fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    WeightedGraph::new(n, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect()).unwrap()
}

/// All simple paths with 1..=k edges, in both directions.
fn paths(g: &WeightedGraph, k: usize) -> Vec<Vec<usize>> {
    fn go(g: &WeightedGraph, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() > 1 {
            out.push(cur.clone());
        }
        if cur.len() == k + 1 {
            return;
        }
        let last = *cur.last().unwrap();
        for &(y, _) in g.neighbors(last) {
            if !cur.contains(&y) {
                cur.push(y);
                go(g, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..g.n() {
        go(g, k, &mut vec![v], &mut out);
    }
    out
}

fn edges_covered(g: &WeightedGraph, forests: &[BfsForest]) -> bool {
    let mut seen = HashSet::new();
    for f in forests {
        for t in f {
            for (a, b, _) in t.edges() {
                seen.insert((a.min(b), a.max(b)));
            }
        }
    }
    g.edges().iter().all(|e| seen.contains(&(e.u.min(e.v), e.u.max(e.v))))
}

#[test]
fn star_base_examples() {
    let star = unit(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    assert_eq!(star_forest_base(&star).len(), 1);

    let tri = unit(3, &[(0, 1), (1, 2), (0, 2)]);
    let base = star_forest_base(&tri);
    assert!(base.len() <= 4);
    assert!(edges_covered(&tri, &base));

    let g = grid(5, 5, Weights::Unit, 0).unwrap().graph;
    let base = star_forest_base(&g);
    assert!(base.len() <= 4, "{}", base.len());
    assert!(edges_covered(&g, &base));
    for f in &base {
        check_bfs_forest(&g, f).unwrap();
        // stars: every non-root vertex hangs off the root
        for t in f {
            assert!(t.parent.iter().skip(1).all(|p| *p == Some(0)));
        }
    }
}

#[test]
fn weighted_input_rejected() {
    let g = grid(3, 3, Weights::Uniform(1.0, 2.0), 0).unwrap().graph;
    assert!(exact_cover(&g, 2, 100).is_err());
}

#[test]
fn expansion_examples() {
    let star = unit(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    let f = vec![RootedTree::singleton(TreeKind::Spanning, 0)];
    let exp = root_expansion(&star, &f).unwrap();
    assert!(exp.iter().any(|f| f.iter().any(|t| t.root() == 0 && t.len() == 5)));

    let tri = unit(3, &[(0, 1), (1, 2), (0, 2)]);
    let edge = RootedTree::from_edges(TreeKind::Spanning, 0, &[(1, 0, 1.0)]).unwrap();
    let exp = root_expansion(&tri, &vec![edge]).unwrap();
    for f in &exp {
        check_bfs_forest(&tri, f).unwrap();
    }
    for p in [[0, 1, 2], [1, 0, 2]] {
        assert!(exp.iter().any(|f| preserves(f, &p)), "{p:?}");
    }

    // not a BFS tree: the path 0-1-2 inside a triangle
    let bad = RootedTree::from_edges(TreeKind::Spanning, 0, &[(1, 0, 1.0), (2, 1, 1.0)]).unwrap();
    assert!(root_expansion(&tri, &vec![bad]).is_err());
}

#[test]
fn exact_small_graphs() {
    let k4 = unit(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let c = exact_cover(&k4, 1, 1000).unwrap();
    verify_exact(&k4, &c).unwrap();

    let p4 = unit(4, &[(0, 1), (1, 2), (2, 3)]);
    let c = exact_cover(&p4, 3, 1000).unwrap();
    verify_exact(&p4, &c).unwrap();

    let g = grid(3, 3, Weights::Unit, 0).unwrap().graph;
    let c = exact_cover(&g, 4, 10_000).unwrap();
    let r = verify_exact(&g, &c).unwrap();
    assert_eq!(r.pairs, 36);
}

#[test]
fn cap_is_enforced() {
    let g = grid(3, 3, Weights::Unit, 0).unwrap().graph;
    let e = exact_cover(&g, 4, 3).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}

fn check_preservation(g: &WeightedGraph, k: usize) {
    let all = paths(g, k);
    let mut layer = exact_cover(g, 1, 100_000).unwrap();
    for len in 1..=k {
        if len > 1 {
            layer = exact_cover(g, len, 100_000).unwrap();
        }
        for p in all.iter().filter(|p| p.len() == len + 1) {
            assert!(layer.iter().any(|f| preserves(f, p)), "path {p:?} of length {len} not preserved");
        }
    }
}

fn check_expansion_contract(g: &WeightedGraph, forests: &[BfsForest], k: usize) {
    let all = paths(g, k);
    for f in forests {
        let exp = root_expansion(g, f).unwrap();
        for e in &exp {
            check_bfs_forest(g, e).unwrap();
        }
        for p in &all {
            if p.len() > 2 && preserves(f, &p[..p.len() - 1]) {
                assert!(exp.iter().any(|e| preserves(e, p)), "extension {p:?} lost");
            }
        }
    }
}

#[test]
fn root_expansion_contract_exhaustive() {
    for (n, seed) in [(8, 1), (12, 2), (16, 3), (20, 4)] {
        let g = random_triangulation(n, 0.3, Weights::Unit, seed).unwrap().graph;
        let d = diameter(&g, true) as usize;
        let k = d.min(3);
        check_preservation(&g, k);
        let base = star_forest_base(&g);
        check_expansion_contract(&g, &base, k);
        let second = exact_cover(&g, 2, 100_000).unwrap();
        check_expansion_contract(&g, &second, k.min(3));
    }
}

#[test]
fn partition_to_cover_singletons() {
    let g = grid(3, 3, Weights::Unit, 0).unwrap().graph;
    let clusters = (0..9).map(|v| Cluster { center: v, column: None, ordinal: 0, vertices: vec![v] }).collect();
    let p = Partition::from_clusters(9, 0.5, 0.125, 4.0, clusters).unwrap();
    let (cover, h) = partition_to_cover(&g, &p, 100_000).unwrap();
    assert_eq!(h, 4);
    let idx = TreeSetIndex::new(9, &cover.trees);
    for u in 0..9 {
        let t = dijkstra(&g, u, None, None);
        for v in 0..9 {
            assert_eq!(idx.min_distance(u, v).0, t.dist[v]);
        }
    }
}

#[test]
fn star_transform_distances() {
    let inst = grid(4, 4, Weights::Uniform(1.0, 3.0), 7).unwrap();
    let g = &inst.graph;
    let clusters = vec![
        Cluster { center: 0, column: None, ordinal: 0, vertices: (0..8).collect() },
        Cluster { center: 8, column: None, ordinal: 1, vertices: (8..16).collect() },
    ];
    let p = Partition::from_clusters(16, 0.5, 0.125, 10.0, clusters).unwrap();
    let single = RootedTree::singleton(TreeKind::Spanning, 1);
    let s = star_transform(g, &p, &single);
    assert_eq!(s.root(), 8);
    assert_eq!(s.len(), 8);
    let from = dijkstra(g, 8, None, None);
    let lca = treecover::tree::LcaIndex::new(&s);
    for u in 8..16 {
        for v in 8..16 {
            let want = if u == v { 0.0 } else { from.dist[u] + from.dist[v] };
            assert!((lca.distance(u, v).unwrap() - want).abs() < 1e-9);
        }
    }
}

#[test]
fn partition_to_cover_grid() {
    let inst = grid(8, 8, Weights::Unit, 0).unwrap();
    let g = &inst.graph;
    let oracle = ExactOracle::new(g).unwrap();
    let delta = oracle.diameter();
    let sp = build_partition(g, &inst.embedding, 0.5, 0.125, delta).unwrap();
    let p = &sp.partition;
    let (cover, h) = partition_to_cover(g, p, 200_000).unwrap();
    // cluster graph hop diameter never exceeds the depth used
    let cg = p.cluster_graph(g);
    let k = cg.len();
    let cedges: Vec<(usize, usize, f64)> = (0..k)
        .flat_map(|a| cg[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b, 1.0)))
        .collect();
    if k > 1 {
        let cgraph = WeightedGraph::new(k, cedges).unwrap();
        assert!(diameter(&cgraph, true) as usize <= h);
    }
    let diam = p
        .clusters
        .iter()
        .map(|c| {
            let scope = treecover::graph::mask(g.n(), &c.vertices);
            c.vertices
                .iter()
                .map(|&v| dijkstra(g, v, Some(&scope), None).dist.iter().cloned().filter(|d| d.is_finite()).fold(0.0, f64::max))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let idx = TreeSetIndex::new(g.n(), &cover.trees);
    let mut worst: f64 = 0.0;
    for u in 0..g.n() {
        for v in 0..g.n() {
            let d = idx.min_distance(u, v).0;
            assert!(d >= oracle.dist(u, v) - 1e-9);
            worst = worst.max(d - oracle.dist(u, v));
        }
    }
    println!("clusters {k} depth {h} trees {} additive {worst} cluster diameter {diam}", cover.trees.len());
    assert!(worst <= 2.0 * diam + 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn exact_cover_is_exact(n in 6usize..30, seed in 0u64..1000) {
        let g = random_triangulation(n, 0.2, Weights::Unit, seed).unwrap().graph;
        let d = diameter(&g, true) as usize;
        prop_assume!(d <= 4);
        let c = exact_cover(&g, d, 200_000).unwrap();
        verify_exact(&g, &c).unwrap();
    }
}
