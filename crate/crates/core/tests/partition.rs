use proptest::prelude::*;
use treecover::generate::{cylinder_grid, grid, random_triangulation, Weights};
use treecover::partition::{build_partition, cluster_column, cost, verify_partition};
use treecover::sssp::diameter;
use treecover::WeightedGraph;

#[test]
fn centers_step_along_a_unit_spine() {
    // path 0-1-...-12 with unit weights and step 4
    let edges: Vec<(usize, usize, f64)> = (0..12).map(|i| (i, i + 1, 1.0)).collect();
    let g = WeightedGraph::new(13, edges).unwrap();
    let spine: Vec<usize> = (0..13).collect();
    let parts = cluster_column(&g, &spine, &spine, 4.0, 1e-9).unwrap();
    let centers: Vec<usize> = parts.iter().map(|p| p.0).collect();
    assert_eq!(centers, vec![0, 4, 8, 12]);
    // vertex 2 is equidistant from centers 0 and 4 and goes to the first
    assert!(parts[0].1.contains(&2));
    assert!(parts[1].1.contains(&6) && !parts[1].1.contains(&2));
}

#[test]
fn cost_counts_cluster_hops() {
    let inst = grid(6, 6, Weights::Unit, 0).unwrap();
    let g = &inst.graph;
    let delta = diameter(g, true);
    let sp = build_partition(g, &inst.embedding, 0.5, 0.125, delta).unwrap();
    let cg = sp.partition.cluster_graph(g);
    assert_eq!(cost(&sp.partition, &cg, &[0]), 0);
    let path = [0, 1, 2, 3, 4, 5];
    let c = cost(&sp.partition, &cg, &path);
    let mut touched: Vec<usize> = path.iter().map(|&v| sp.partition.cluster_of[v]).collect();
    touched.sort_unstable();
    touched.dedup();
    assert!(c < touched.len());
}

#[test]
fn partitions_verify_on_standard_instances() {
    for seed in 0..4 {
        for &eps in &[0.5, 0.25] {
            for inst in [
                grid(10, 10, Weights::Uniform(1.0, 2.0), seed).unwrap(),
                cylinder_grid(10, 6, Weights::Unit, seed).unwrap(),
                random_triangulation(120, 0.3, Weights::Uniform(1.0, 3.0), seed).unwrap(),
            ] {
                let g = &inst.graph;
                let delta = diameter(g, true);
                let sp = build_partition(g, &inst.embedding, eps, 0.125, delta).unwrap();
                let rep = verify_partition(g, &sp.hierarchy, &sp.partition, 10_000, seed).unwrap();
                assert!(rep.max_diameter <= 4.0 * eps * delta + 1e-9);
                assert!(rep.max_cost_ratio <= 1.0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn partition_invariants(n in 20usize..90, seed in 0u64..10_000, eps in prop::sample::select(vec![0.5, 0.25, 0.1])) {
        let inst = random_triangulation(n, 0.25, Weights::Uniform(0.5, 3.0), seed).unwrap();
        let g = &inst.graph;
        let delta = diameter(g, true);
        let sp = build_partition(g, &inst.embedding, eps, 0.125, delta).unwrap();
        prop_assert!(verify_partition(g, &sp.hierarchy, &sp.partition, 2000, seed).is_ok());
        prop_assert!(treecover::gridtree::check_hierarchy(g, &sp.hierarchy).is_ok());
    }
}
