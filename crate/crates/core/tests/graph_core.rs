use proptest::prelude::*;
use treecover::generate::{cylinder_grid, grid, random_triangulation, series_parallel, Weights};
use treecover::io::{read_graph, read_td, write_graph, write_td};
use treecover::sssp::{diameter, dijkstra, multi_source, ExactOracle};
use treecover::{FaceIndex, WeightedGraph};

fn floyd(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in g.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.w);
        d[e.v][e.u] = d[e.v][e.u].min(e.w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

#[test]
fn rejects_bad_inputs() {
    assert!(WeightedGraph::new(2, vec![(0, 0, 1.0)]).is_err());
    assert!(WeightedGraph::new(2, vec![(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    assert!(WeightedGraph::new(2, vec![(0, 1, -1.0)]).is_err());
    assert!(WeightedGraph::new(3, vec![(0, 1, 1.0)]).is_err());
    assert!(WeightedGraph::new(2, vec![(0, 5, 1.0)]).is_err());
}

#[test]
fn grid_and_cylinder_shapes() {
    let g = grid(5, 5, Weights::Unit, 0).unwrap();
    assert_eq!(g.graph.m(), 40);
    assert_eq!(diameter(&g.graph, true), 8.0);
    assert_eq!(g.embedding.outer_vertices(&g.graph).len(), 16);
    let c = cylinder_grid(6, 4, Weights::Unit, 0).unwrap();
    assert_eq!(c.embedding.outer_vertices(&c.graph), (0..6).collect::<Vec<_>>());
    assert_eq!(c.embedding.faces(&c.graph).unwrap().faces.len(), 2 + 6 * 3);
}

#[test]
fn generators_are_deterministic() {
    let a = random_triangulation(60, 0.3, Weights::Uniform(1.0, 3.0), 9).unwrap();
    let b = random_triangulation(60, 0.3, Weights::Uniform(1.0, 3.0), 9).unwrap();
    assert_eq!(write_graph(&a.graph, Some(&a.embedding)), write_graph(&b.graph, Some(&b.embedding)));
    let c = random_triangulation(60, 0.3, Weights::Uniform(1.0, 3.0), 10).unwrap();
    assert_ne!(write_graph(&a.graph, None), write_graph(&c.graph, None));
}

#[test]
fn series_parallel_decomposition_is_valid() {
    for seed in 0..10 {
        let (g, td) = series_parallel(80, 0.3, Weights::Uniform(1.0, 2.0), seed).unwrap();
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 2);
        let back = read_td(&write_td(&td, g.n())).unwrap();
        assert_eq!(back, td);
    }
}

#[test]
fn text_round_trip_is_byte_identical() {
    let inst = random_triangulation(40, 0.2, Weights::Uniform(0.5, 2.0), 3).unwrap();
    let s = write_graph(&inst.graph, Some(&inst.embedding));
    let (g, emb) = read_graph(&s).unwrap();
    assert_eq!(write_graph(&g, emb.as_ref()), s);
}

#[test]
fn parse_errors_carry_line_numbers() {
    match read_graph("p 2 1\ne 0 1 x\n") {
        Err(treecover::Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn induced_outer_face_matches_traced_face() {
    let inst = cylinder_grid(8, 5, Weights::Unit, 0).unwrap();
    let g = &inst.graph;
    let idx = FaceIndex::new(g, &inst.embedding).unwrap();
    // drop the outer ring: ring 1 becomes the outer face
    let verts: Vec<usize> = (8..g.n()).collect();
    let scope = treecover::graph::mask(g.n(), &verts);
    let of = idx.outer_face(g, &scope);
    let ext: Vec<usize> = (0..g.n()).filter(|&v| scope[v] && of.vertex_is_outer(g, v)).collect();
    assert_eq!(ext, (8..16).collect::<Vec<_>>());
    let (sub, emb, map) = treecover::embedding::induced(g, &inst.embedding, &idx, &verts).unwrap();
    let traced: Vec<usize> = emb.outer_vertices(&sub).iter().map(|&v| map[v]).collect();
    assert_eq!(traced, ext);
}

#[test]
fn multi_source_labels_follow_tree_paths() {
    let inst = grid(7, 7, Weights::Uniform(1.0, 2.0), 4).unwrap();
    let t = multi_source(&inst.graph, &[(0, 0), (48, 1), (24, 2)], None, None);
    for v in 0..49 {
        for x in t.path_to(v) {
            assert_eq!(t.label[x], t.label[v]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dijkstra_matches_floyd(n in 4usize..40, seed in 0u64..1000, frac in 0.0f64..0.6) {
        let inst = random_triangulation(n, frac, Weights::Uniform(0.5, 4.0), seed).unwrap();
        let g = &inst.graph;
        let fw = floyd(g);
        let oracle = ExactOracle::new(g).unwrap();
        for u in 0..n {
            let t = dijkstra(g, u, None, None);
            for v in 0..n {
                prop_assert!((t.dist[v] - fw[u][v]).abs() < 1e-9);
                prop_assert!((oracle.dist(u, v) - fw[u][v]).abs() < 1e-9);
            }
        }
        // Euler's formula holds for every generated embedding
        let faces = inst.embedding.faces(g).unwrap();
        prop_assert_eq!(n as i64 - g.m() as i64 + faces.faces.len() as i64, 2);
        let approx = diameter(g, false);
        let exact = diameter(g, true);
        prop_assert!(approx <= exact + 1e-9 && 2.0 * approx >= exact - 1e-9);
    }

    #[test]
    fn radius_and_scope_are_respected(seed in 0u64..500, r in 0.5f64..6.0) {
        let inst = grid(6, 6, Weights::Uniform(1.0, 2.0), seed).unwrap();
        let g = &inst.graph;
        let scope: Vec<bool> = (0..36).map(|v| v % 6 != 3).collect();
        let t = dijkstra(g, 0, Some(&scope), Some(r));
        let full = dijkstra(g, 0, Some(&scope), None);
        for v in 0..36 {
            prop_assert_eq!(t.reached(v), scope[v] && full.dist[v] <= r);
        }
    }
}
