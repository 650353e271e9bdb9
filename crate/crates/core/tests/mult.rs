use std::time::Instant;
use treecover::generate::{cylinder_grid, grid, random_triangulation, PlanarInstance, Weights};
use treecover::mult::{
    build_hpf, build_nets, glue_trees, hpf_to_hppf, multiplicative_cover, verify_mult, HierarchicalPartition,
    MultParams, PlanarAdditive,
};
use treecover::sssp::ExactOracle;
use treecover::tree::{LcaIndex, RootedTree, TreeKind};
use treecover::WeightedGraph;

fn path(n: usize) -> PlanarInstance {
    grid(1, n, Weights::Unit, 0).unwrap()
}

fn run(inst: &PlanarInstance, eps: f64, seed: u64) {
    let t0 = Instant::now();
    let g = &inst.graph;
    let m = multiplicative_cover(g, &inst.embedding, MultParams::new(eps, seed)).unwrap();
    let oracle = ExactOracle::new(g).unwrap();
    for h in &m.hppf.hierarchies {
        h.validate(&oracle).unwrap();
    }
    let r = verify_mult(&oracle, &m).unwrap();
    println!(
        "n {} eps {eps}: sigma {} kappa {} rho {:.2} a {:.3} c0 {:.3} {r:?} in {:?}",
        g.n(),
        m.hppf.hierarchies.len(),
        m.hppf.kappa,
        m.hppf.rho,
        m.a,
        m.c0,
        t0.elapsed()
    );
}

#[test]
fn two_points() {
    let g = WeightedGraph::new(2, vec![(0, 1, 3.0)]).unwrap();
    let o = ExactOracle::new(&g).unwrap();
    let hpf = build_hpf(&g, &o, 16.0, 8, 0).unwrap();
    assert_eq!(hpf.hierarchies.len(), 1);
    let hp = &hpf.hierarchies[0];
    hp.validate(&o).unwrap();
    let nets = build_nets(hp).unwrap();
    assert_eq!(nets.nets.last().unwrap().len(), 1);
    assert_eq!(nets.nets[0], vec![0, 1]);
}

#[test]
fn unit_path_hierarchies() {
    let inst = path(16);
    let o = ExactOracle::new(&inst.graph).unwrap();
    let hpf = build_hpf(&inst.graph, &o, 16.0, 64, 1).unwrap();
    for h in &hpf.hierarchies {
        h.validate(&o).unwrap();
        let nets = build_nets(h).unwrap();
        for l in 0..h.levels.len() {
            // one net point per cluster, and nets shrink upwards
            assert_eq!(nets.nets[l].len(), h.levels[l].clusters.len());
            if l > 0 {
                assert!(nets.nets[l].iter().all(|x| nets.nets[l - 1].contains(x)));
            }
            for x in 0..16 {
                assert!(o.dist(x, nets.ancestor(h, l, x)) <= h.levels[l].radius + 1e-9);
            }
        }
    }
    let hppf = hpf_to_hppf(&hpf, &o, 0.5).unwrap();
    assert_eq!(hppf.kappa, 1);
    assert_eq!(hppf.hierarchies.len(), hpf.hierarchies.len());
    let split = hpf_to_hppf(&hpf, &o, 0.05).unwrap();
    assert_eq!(split.kappa, 3);
    assert_eq!(split.hierarchies.len(), 3 * hpf.hierarchies.len());
    assert!(split.mu >= 20.0);
    for h in &split.hierarchies {
        h.validate(&o).unwrap();
    }
}

#[test]
fn single_scale_glue_is_the_cover_tree() {
    let n = 3;
    let hp = HierarchicalPartition {
        levels: vec![
            serde_json::from_str(r#"{"radius":0.0,"cluster_of":[0,1,2],"clusters":[[0],[1],[2]]}"#).unwrap(),
            serde_json::from_str(r#"{"radius":4.0,"cluster_of":[0,0,0],"clusters":[[0,1,2]]}"#).unwrap(),
        ],
    };
    let nets = build_nets(&hp).unwrap();
    let t = RootedTree::from_edges(TreeKind::Spanning, 0, &[(1, 0, 1.0), (2, 1, 1.0)]).unwrap();
    let glued = glue_trees(n, &hp, &nets, &vec![vec![], vec![vec![t.clone()]]], 1).unwrap();
    assert_eq!(glued.len(), 1);
    let (a, b) = (LcaIndex::new(&glued[0]), LcaIndex::new(&t));
    for x in 0..3 {
        for y in 0..3 {
            assert_eq!(a.distance(x, y), b.distance(x, y));
        }
    }
}

#[test]
fn planar_additive_dominates() {
    let inst = grid(6, 6, Weights::Uniform(1.0, 2.0), 3).unwrap();
    let o = ExactOracle::new(&inst.graph).unwrap();
    let b = PlanarAdditive::new(&inst.graph, &inst.embedding, 0.5).unwrap();
    let pts = vec![0, 5, 14, 21, 30, 35];
    for t in b.build(&pts).unwrap() {
        let idx = LcaIndex::new(&t);
        for &x in &pts {
            for &y in &pts {
                if let (Some(d), true) = (idx.distance(x, y), x != y) {
                    assert!(d >= o.dist(x, y) - 1e-9);
                }
            }
        }
    }
}

#[test]
fn unit_path_cover() {
    run(&path(32), 0.25, 0);
}

#[test]
fn planar_covers() {
    run(&grid(8, 8, Weights::Uniform(1.0, 3.0), 1).unwrap(), 0.5, 1);
    run(&random_triangulation(120, 0.3, Weights::Uniform(1.0, 4.0), 2).unwrap(), 0.5, 2);
    run(&cylinder_grid(10, 10, Weights::Unit, 3).unwrap(), 0.25, 3);
}
