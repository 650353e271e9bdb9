use proptest::prelude::*;
use treecover::decomposition::TreeDecomposition;
use treecover::generate::{series_parallel, Weights};
use treecover::sssp::{diameter, ExactOracle};
use treecover::tw_partition::{
    augmented, finalize_clusters, hop_recurrence, preprocess, tw_partition, verify_tw_partition, Ball,
};
use treecover::WeightedGraph;

fn path3() -> (WeightedGraph, TreeDecomposition) {
    let g = WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    let td = TreeDecomposition { bags: vec![vec![0, 1], vec![1, 2]], edges: vec![(0, 1)] };
    (g, td)
}

#[test]
fn preprocess_path() {
    let (g, td) = path3();
    let pre = preprocess(&g, &td).unwrap();
    let ones: Vec<usize> = (0..pre.copy_of.len()).filter(|&c| pre.copy_of[c] == 1).collect();
    assert_eq!(ones.len(), 2);
    assert_eq!(pre.graph.weight(ones[0], ones[1]), Some(0.0));
}

#[test]
fn preprocess_single_bag_is_clique() {
    let g = WeightedGraph::new(4, vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.5)]).unwrap();
    let td = TreeDecomposition { bags: vec![vec![0, 1, 2, 3]], edges: vec![] };
    let pre = preprocess(&g, &td).unwrap();
    assert_eq!(pre.graph.m(), 6);
    let o = ExactOracle::new(&g).unwrap();
    for e in pre.graph.edges() {
        assert_eq!(e.w, o.dist(pre.copy_of[e.u], pre.copy_of[e.v]));
    }
}

#[test]
fn preprocess_rejects_bad_decomposition() {
    let (g, _) = path3();
    let td = TreeDecomposition { bags: vec![vec![0, 1], vec![2]], edges: vec![(0, 1)] };
    assert_eq!(preprocess(&g, &td).unwrap_err().exit_code(), 1);
}

#[test]
fn copies_keep_distances() {
    let (g, td) = series_parallel(60, 0.2, Weights::Uniform(1.0, 4.0), 3).unwrap();
    let pre = preprocess(&g, &td).unwrap();
    let a = ExactOracle::new(&g).unwrap();
    let b = ExactOracle::new(&pre.graph).unwrap();
    for x in 0..pre.copy_of.len() {
        for y in 0..pre.copy_of.len() {
            assert!((b.dist(x, y) - a.dist(pre.copy_of[x], pre.copy_of[y])).abs() < 1e-9);
        }
    }
    let plus = augmented(&g, &td).unwrap();
    let c = ExactOracle::new(&plus).unwrap();
    for x in 0..g.n() {
        for y in 0..g.n() {
            assert!((c.dist(x, y) - a.dist(x, y)).abs() < 1e-9);
        }
    }
}

#[test]
fn overlapping_balls_split_toward_smaller_center() {
    let (g, td) = path3();
    let pre = preprocess(&g, &td).unwrap();
    // copies: bag 0 = [0, 1], bag 1 = [2, 3] for vertices [1, 2]
    let balls = vec![
        Ball { round: 2, root_bag: 0, center: 0, copies: vec![0, 1, 2] },
        Ball { round: 2, root_bag: 1, center: 3, copies: vec![1, 2, 3] },
    ];
    let p = finalize_clusters(&pre, &balls, 0.5, 2.0).unwrap();
    assert_eq!(p.clusters.len(), 2);
    assert_eq!(p.clusters[0].vertices, vec![0, 1]);
    assert_eq!(p.clusters[1].vertices, vec![2]);
}

#[test]
fn whole_path_in_one_ball() {
    let (g, td) = path3();
    let tp = tw_partition(&g, &td, 0.99, 2.0).unwrap();
    // radius 1.98 from vertex 0 misses vertex 2, so a second round is needed
    assert!(tp.partition.clusters.len() <= 2);
    let tp = tw_partition(&g, &td, 0.5, 4.0).unwrap();
    assert_eq!(tp.partition.clusters.len(), 1);
}

#[test]
fn recurrence_values() {
    assert_eq!(hop_recurrence(0, 0.5), 1.0);
    // k = 1: J_1 = 2, J_2 = (2 * 5 + 1) * 2 + 10
    assert_eq!(hop_recurrence(1, 0.5), 32.0);
}

fn run(n: usize, eps: f64, seed: u64) {
    let (g, td) = series_parallel(n, 0.25, Weights::Uniform(1.0, 3.0), seed).unwrap();
    let delta = diameter(&g, true);
    let tp = tw_partition(&g, &td, eps, delta).unwrap();
    assert!(tp.unclustered.len() <= td.width() + 1);
    assert!(tp.unclustered.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(*tp.unclustered.last().unwrap(), 0);
    let r = verify_tw_partition(&g, &td, &tp.partition, 200, seed).unwrap();
    assert!(r.max_diameter <= r.diameter_bound + 1e-9 * delta);
    assert!(r.max_hops as f64 <= r.hop_bound);

    // centers of one round in nested root bags are far apart
    let (parent, _) = td.rooted().unwrap();
    let ancestor = |a: usize, mut b: usize| loop {
        match parent[b] {
            Some(p) if p == a => return true,
            Some(p) => b = p,
            None => return false,
        }
    };
    let o = ExactOracle::new(&tp.pre.graph).unwrap();
    for x in &tp.balls {
        for y in &tp.balls {
            if x.round == y.round && ancestor(x.root_bag, y.root_bag) {
                assert!(o.dist(x.center, y.center) > eps * delta);
            }
        }
    }
}

#[test]
fn series_parallel_sweep() {
    for seed in 0..6 {
        for eps in [0.5, 0.25] {
            run(120 + 30 * seed as usize, eps, seed);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn partition_properties(n in 4usize..80, seed in 0u64..10_000, eps in 0.1f64..0.9) {
        run(n, eps, seed);
    }
}
