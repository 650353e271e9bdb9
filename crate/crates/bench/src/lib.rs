//! Fixed instances shared by the benchmarks.

use treecover::generate::{grid, random_triangulation, series_parallel, PlanarInstance, Weights};
use treecover::{TreeDecomposition, WeightedGraph};

pub fn weighted_grid(side: usize) -> PlanarInstance {
    grid(side, side, Weights::Uniform(1.0, 3.0), 1).expect("grid")
}

pub fn triangulation(n: usize) -> PlanarInstance {
    random_triangulation(n, 0.3, Weights::Uniform(1.0, 4.0), 2).expect("triangulation")
}

pub fn series_parallel_graph(n: usize) -> (WeightedGraph, TreeDecomposition) {
    series_parallel(n, 0.2, Weights::Uniform(1.0, 2.0), 3).expect("series-parallel")
}
