use treecover::generate::{cylinder_grid, grid, random_triangulation, PlanarInstance, Weights};
use treecover::gridtree::{check_hierarchy, Hierarchy};
use treecover::sssp::diameter;

fn run(inst: &PlanarInstance, eps: f64) -> treecover::Result<treecover::gridtree::HierarchyReport> {
    let delta = diameter(&inst.graph, true);
    let h = Hierarchy::build(&inst.graph, &inst.embedding, eps * delta / 8.0, delta)?;
    check_hierarchy(&inst.graph, &h)
}

#[test]
fn sweep() {
    let mut fails = Vec::new();
    for seed in 0..60u64 {
        for &eps in &[0.5, 0.25, 0.1] {
            let insts = vec![
                ("grid", grid(8 + (seed % 7) as usize, 9, Weights::Uniform(1.0, 2.0), seed).unwrap()),
                ("unitgrid", grid(10, 10, Weights::Unit, seed).unwrap()),
                ("cyl", cylinder_grid(12, 8, Weights::Uniform(1.0, 2.0), seed).unwrap()),
                ("tri", random_triangulation(150, 0.3, Weights::Uniform(1.0, 4.0), seed).unwrap()),
                ("tri0", random_triangulation(100, 0.0, Weights::Uniform(0.2, 1.0), seed).unwrap()),
            ];
            for (name, inst) in insts {
                if let Err(e) = run(&inst, eps) {
                    fails.push(format!("{name} seed={seed} eps={eps}: {e}"));
                }
            }
        }
    }
    assert!(fails.is_empty(), "{} failures:\n{}", fails.len(), fails.join("\n"));
}
