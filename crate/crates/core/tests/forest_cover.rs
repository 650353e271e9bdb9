use std::time::Instant;
use treecover::forest_cover::{cover_hierarchy, forests_to_trees, verify_cover};
use treecover::generate::{cylinder_grid, grid, random_triangulation, PlanarInstance, Weights};
use treecover::partition::build_partition;
use treecover::sssp::{diameter, dijkstra, ExactOracle};
use treecover::tree::TreeSetIndex;

fn check(inst: &PlanarInstance, eps: f64) -> treecover::forest_cover::CoverReport {
    let g = &inst.graph;
    let oracle = ExactOracle::new(g).unwrap();
    let delta = oracle.diameter();
    let sp = build_partition(g, &inst.embedding, eps, 0.125, delta).unwrap();
    let fc = cover_hierarchy(g, &sp.hierarchy, &sp.partition).unwrap();
    verify_cover(g, &oracle, &fc).unwrap()
}

#[test]
fn additive_cover_on_grid_20() {
    let inst = grid(20, 20, Weights::Uniform(1.0, 2.0), 1).unwrap();
    for eps in [0.5, 0.25, 0.1] {
        let t0 = Instant::now();
        let r = check(&inst, eps);
        println!("eps {eps}: {r:?} in {:?}", t0.elapsed());
    }
}

#[test]
fn additive_cover_small_instances() {
    for seed in 0..3 {
        for inst in [
            cylinder_grid(12, 6, Weights::Unit, seed).unwrap(),
            random_triangulation(150, 0.3, Weights::Uniform(1.0, 3.0), seed).unwrap(),
        ] {
            for eps in [0.5, 0.25] {
                let r = check(&inst, eps);
                assert!(r.max_additive <= r.additive_bound);
            }
        }
    }
}

#[test]
fn trees_are_shortest_path_trees_of_their_ball() {
    let inst = grid(8, 8, Weights::Uniform(1.0, 2.0), 5).unwrap();
    let g = &inst.graph;
    let delta = diameter(g, true);
    let sp = build_partition(g, &inst.embedding, 0.5, 0.125, delta).unwrap();
    let fc = cover_hierarchy(g, &sp.hierarchy, &sp.partition).unwrap();
    for f in &fc.forests {
        for t in &f.trees {
            let mut scope = vec![false; g.n()];
            for &v in &t.vertices {
                scope[v] = true;
            }
            let sssp = dijkstra(g, t.root(), Some(&scope), None);
            for (i, d) in t.root_distances().into_iter().enumerate() {
                assert!((d - sssp.dist[t.vertices[i]]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn hub_trees_dominate() {
    let inst = random_triangulation(80, 0.2, Weights::Uniform(1.0, 2.0), 2).unwrap();
    let g = &inst.graph;
    let oracle = ExactOracle::new(g).unwrap();
    let delta = oracle.diameter();
    let sp = build_partition(g, &inst.embedding, 0.25, 0.125, delta).unwrap();
    let fc = cover_hierarchy(g, &sp.hierarchy, &sp.partition).unwrap();
    let tc = forests_to_trees(&fc, g.n());
    assert_eq!(tc.trees.len(), fc.forests.len());
    let idx = TreeSetIndex::new(g.n(), &tc.trees);
    for u in 0..g.n() {
        for v in 0..g.n() {
            for &(ti, _) in idx.trees_of(u) {
                if let Some(d) = idx.lca[ti].distance(u, v) {
                    assert!(d >= oracle.dist(u, v) - 1e-9);
                }
            }
        }
    }
}

#[test]
fn long_paths_keep_forests_disjoint() {
    // one-vertex columns: level groups must scale with the column width
    for n in [32, 64, 100] {
        let inst = grid(1, n, Weights::Unit, 0).unwrap();
        for eps in [0.5, 0.25] {
            let r = check(&inst, eps);
            assert!(r.max_additive <= r.additive_bound);
        }
    }
}
