use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use treecover::exact_cover::{exact_cover, verify_exact, BfsForest};
use treecover::forest_cover::{cover_hierarchy, forest_bound, forests_to_trees, verify_cover, ForestCover, TreeCover};
use treecover::generate::{cylinder_grid, grid, random_triangulation, rng, series_parallel, Weights};
use treecover::gridtree::{check_hierarchy, Hierarchy};
use treecover::io::{from_json, read_graph, read_td, to_json, write_graph, write_td};
use treecover::mult::{multiplicative_cover, verify_mult, MultCover, MultParams};
use treecover::oracle::{build_emulator, build_oracle};
use treecover::partition::{build_partition, verify_partition, Partition};
use treecover::sssp::{diameter, dijkstra, ExactOracle, TOL};
use treecover::tw_embed::{embed, verify_embedding, Embedding};
use treecover::tw_partition::{tw_partition, verify_tw_partition};
use treecover::{Error, PlanarEmbedding, TreeDecomposition, WeightedGraph};

/// Tree covers, shortcut partitions and low-treewidth embeddings of planar
/// and bounded-treewidth graphs.
#[derive(Parser)]
#[command(name = "treecover", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Opts {
    /// Accuracy parameter in (0, 1).
    #[arg(long, global = true, default_value_t = 0.5)]
    eps: f64,
    /// Column width factor in (0, 1/8].
    #[arg(long, global = true, default_value_t = 0.125)]
    t: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Use the exact diameter instead of twice a double-sweep estimate.
    #[arg(long, global = true)]
    exact_diameter: bool,
    /// Verify at most this many seeded random pairs instead of all pairs.
    #[arg(long, global = true)]
    max_pairs: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph (`grid R C`, `cylinder C H`, `triangulation N`, `series-parallel N`).
    Gen {
        family: Family,
        dims: Vec<usize>,
        /// `unit` or `uniform:LO:HI`.
        #[arg(long, default_value = "unit")]
        weights: String,
        /// Fraction of removable edges to delete.
        #[arg(long, default_value_t = 0.0)]
        delete: f64,
        /// Where to write the decomposition of a series-parallel graph.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Additive forest cover of an embedded planar graph.
    BuildCover {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exact spanning cover of an unweighted graph.
    ExactCover {
        graph: PathBuf,
        /// Expansion rounds; defaults to the hop diameter.
        #[arg(long)]
        depth: Option<usize>,
        /// Largest number of forests allowed.
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Multiplicative tree cover of an embedded planar graph.
    BuildMult {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Low-treewidth embedding of an embedded planar graph.
    EmbedTw {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Partition of a graph given with a tree decomposition.
    TwPartition {
        graph: PathBuf,
        td: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Oracle statistics and batch queries (`u v` per line, `-` for stdin).
    Oracle {
        cover: PathBuf,
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
    /// Approximate distance between two vertices.
    Query { cover: PathBuf, u: usize, v: usize },
    /// Emulator over a terminal set, written in the graph format.
    Emulator {
        cover: PathBuf,
        /// Comma-separated terminal ids.
        #[arg(long, value_delimiter = ',', required = true)]
        terminals: Vec<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check an artifact against its graph; exits 2 on a violation.
    Verify {
        graph: PathBuf,
        artifact: PathBuf,
        /// Decomposition file for treewidth partitions.
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Sizes, measured slacks and bounds of an artifact.
    Stats {
        graph: PathBuf,
        artifact: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Grid,
    Cylinder,
    Triangulation,
    SeriesParallel,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Artifact {
    Additive { n: usize, t: f64, hierarchy: Hierarchy, partition: Partition, cover: ForestCover },
    Exact { n: usize, depth: usize, forests: Vec<BfsForest> },
    Multiplicative { cover: MultCover },
    TwPartition { n: usize, eps: f64, delta: f64, width: usize, partition: Partition },
    TwEmbedding { eps: f64, delta: f64, embedding: Embedding },
}

impl Artifact {
    fn n(&self) -> usize {
        match self {
            Artifact::Additive { n, .. } | Artifact::Exact { n, .. } | Artifact::TwPartition { n, .. } => *n,
            Artifact::Multiplicative { cover } => cover.cover.n,
            Artifact::TwEmbedding { embedding, .. } => embedding.host.n(),
        }
    }

    fn trees(&self) -> Result<TreeCover> {
        Ok(match self {
            Artifact::Additive { n, cover, .. } => forests_to_trees(cover, *n),
            Artifact::Exact { n, forests, .. } => TreeCover { n: *n, trees: forests.iter().flatten().cloned().collect() },
            Artifact::Multiplicative { cover } => cover.cover.clone(),
            _ => return Err(Error::InvalidInput("artifact is not a tree cover".into()).into()),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Error>().map_or(1, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let o = cli.opts;
    if !(o.eps > 0.0 && o.eps < 1.0) {
        bail!(Error::InvalidInput(format!("--eps must lie in (0, 1), got {}", o.eps)));
    }
    if !(o.t > 0.0 && o.t <= 0.125) {
        bail!(Error::InvalidInput(format!("--t must lie in (0, 1/8], got {}", o.t)));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(o.threads.max(1)).build()?;
    pool.install(|| dispatch(&o, cli.cmd))
}

fn dispatch(o: &Opts, cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Gen { family, dims, weights, delete, td, out } => gen(o, family, &dims, &weights, delete, td, out),
        Cmd::BuildCover { graph, out } => {
            let (g, emb) = load_planar(&graph)?;
            let delta = delta(o, &g);
            let sp = build_partition(&g, &emb, o.eps, o.t, delta)?;
            let cover = cover_hierarchy(&g, &sp.hierarchy, &sp.partition)?;
            let a = Artifact::Additive { n: g.n(), t: o.t, hierarchy: sp.hierarchy, partition: sp.partition, cover };
            emit(out, &to_json(&a)?)
        }
        Cmd::ExactCover { graph, depth, cap, out } => {
            let (g, _) = load(&graph)?;
            let depth = depth.unwrap_or_else(|| diameter(&g, true).round() as usize);
            let forests = exact_cover(&g, depth, cap)?;
            emit(out, &to_json(&Artifact::Exact { n: g.n(), depth, forests })?)
        }
        Cmd::BuildMult { graph, out } => {
            let (g, emb) = load_planar(&graph)?;
            let cover = multiplicative_cover(&g, &emb, MultParams::new(o.eps, o.seed))?;
            emit(out, &to_json(&Artifact::Multiplicative { cover })?)
        }
        Cmd::EmbedTw { graph, out } => {
            let (g, emb) = load_planar(&graph)?;
            let delta = delta(o, &g);
            let embedding = embed(&g, &emb, o.eps, delta)?;
            emit(out, &to_json(&Artifact::TwEmbedding { eps: o.eps, delta, embedding })?)
        }
        Cmd::TwPartition { graph, td, out } => {
            let (g, _) = load(&graph)?;
            let td = load_td(&td)?;
            let delta = delta(o, &g);
            let p = tw_partition(&g, &td, o.eps, delta)?;
            let a = Artifact::TwPartition { n: g.n(), eps: o.eps, delta, width: p.width, partition: p.partition };
            emit(out, &to_json(&a)?)
        }
        Cmd::Oracle { cover, pairs } => {
            let oracle = build_oracle(&load_artifact(&cover)?.trees()?)?;
            let mut s = String::new();
            writeln!(s, "vertices {}", oracle.n())?;
            writeln!(s, "trees {}", oracle.tree_count())?;
            writeln!(s, "index_size {}", oracle.index_size())?;
            if let Some(p) = pairs {
                let text = if p.as_os_str() == "-" {
                    std::io::read_to_string(std::io::stdin())?
                } else {
                    read(&p)?
                };
                for (i, line) in text.lines().enumerate() {
                    let mut it = line.split_whitespace();
                    let (Some(u), Some(v)) = (it.next(), it.next()) else { continue };
                    let parse = |x: &str| {
                        x.parse::<usize>().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex {x}") })
                    };
                    let (u, v) = (parse(u)?, parse(v)?);
                    let (d, lookups) = oracle.query_counted(u, v)?;
                    writeln!(s, "{u} {v} {d} {lookups}")?;
                }
            }
            emit(None, &s)
        }
        Cmd::Query { cover, u, v } => {
            let oracle = build_oracle(&load_artifact(&cover)?.trees()?)?;
            emit(None, &format!("{}\n", oracle.query(u, v)?))
        }
        Cmd::Emulator { cover, terminals, out } => {
            let e = build_emulator(&load_artifact(&cover)?.trees()?, &terminals)?;
            let mut s = String::new();
            let list: Vec<String> = terminals.iter().map(|t| t.to_string()).collect();
            writeln!(s, "c terminals {}", list.join(" "))?;
            s.push_str(&write_graph(&e.graph, None));
            emit(out, &s)
        }
        Cmd::Verify { graph, artifact, td } => {
            let lines = measure(o, &graph, &artifact, td.as_deref())?;
            emit(None, &format!("ok\n{lines}"))
        }
        Cmd::Stats { graph, artifact, td } => emit(None, &measure(o, &graph, &artifact, td.as_deref())?),
    }
}

fn gen(
    o: &Opts,
    family: Family,
    dims: &[usize],
    weights: &str,
    delete: f64,
    td: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<()> {
    let w = parse_weights(weights)?;
    let arity = if matches!(family, Family::Grid | Family::Cylinder) { 2 } else { 1 };
    if dims.len() != arity {
        bail!(Error::InvalidInput(format!("expected {arity} size argument(s), got {}", dims.len())));
    }
    let text = match family {
        Family::Grid => planar_text(grid(dims[0], dims[1], w, o.seed)?),
        Family::Cylinder => planar_text(cylinder_grid(dims[0], dims[1], w, o.seed)?),
        Family::Triangulation => planar_text(random_triangulation(dims[0], delete, w, o.seed)?),
        Family::SeriesParallel => {
            let (g, d) = series_parallel(dims[0], delete, w, o.seed)?;
            if let Some(path) = td {
                emit(Some(path), &write_td(&d, g.n()))?;
            }
            write_graph(&g, None)
        }
    };
    emit(out, &text)
}

fn planar_text(inst: treecover::generate::PlanarInstance) -> String {
    write_graph(&inst.graph, Some(&inst.embedding))
}

fn parse_weights(s: &str) -> Result<Weights> {
    if s == "unit" {
        return Ok(Weights::Unit);
    }
    let parts: Vec<&str> = s.split(':').collect();
    if let ["uniform", lo, hi] = parts.as_slice() {
        let (lo, hi): (f64, f64) = (lo.parse()?, hi.parse()?);
        if lo >= 0.0 && hi >= lo {
            return Ok(Weights::Uniform(lo, hi));
        }
    }
    bail!(Error::InvalidInput(format!("weights must be `unit` or `uniform:LO:HI`, got {s}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::from).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(&p, text).map_err(Error::from).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(WeightedGraph, Option<PlanarEmbedding>)> {
    Ok(read_graph(&read(path)?)?)
}

fn load_planar(path: &Path) -> Result<(WeightedGraph, PlanarEmbedding)> {
    let (g, emb) = load(path)?;
    let emb = emb.ok_or_else(|| Error::InvalidInput(format!("{} has no embedding", path.display())))?;
    Ok((g, emb))
}

fn load_td(path: &Path) -> Result<TreeDecomposition> {
    Ok(read_td(&read(path)?)?)
}

fn load_artifact(path: &Path) -> Result<Artifact> {
    Ok(from_json(&read(path)?)?)
}

/// Diameter used as the scale of additive constructions.
fn delta(o: &Opts, g: &WeightedGraph) -> f64 {
    if o.exact_diameter {
        diameter(g, true)
    } else {
        2.0 * diameter(g, false)
    }
}

/// Seeded sample of `k` distinct pairs `u < v`, or every pair when `k` is
/// at least the pair count.
fn pairs(n: usize, k: Option<usize>, seed: u64) -> Option<Vec<(usize, usize)>> {
    let total = n * (n - 1) / 2;
    let k = k.filter(|&k| k < total)?;
    let mut r = rng(seed);
    let mut set = std::collections::BTreeSet::new();
    while set.len() < k {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v {
            set.insert((u.min(v), u.max(v)));
        }
    }
    Some(set.into_iter().collect())
}

/// Worst `approx / dist` and `approx - dist` over sampled pairs, failing if
/// `approx` leaves `[dist, upper(dist)]`.
fn sampled_check(
    g: &WeightedGraph,
    sample: &[(usize, usize)],
    approx: impl Fn(usize, usize) -> f64 + Sync,
    upper: impl Fn(f64) -> f64 + Sync,
    tol: f64,
) -> Result<(f64, f64)> {
    let mut sources: Vec<usize> = sample.iter().map(|p| p.0).collect();
    sources.dedup();
    let worst = sources
        .par_iter()
        .map(|&u| {
            let t = dijkstra(g, u, None, None);
            let mut w = (1.0f64, 0.0f64);
            for &(_, v) in sample.iter().filter(|p| p.0 == u) {
                let (d, a) = (t.dist[v], approx(u, v));
                if a < d - tol || a > upper(d) + tol {
                    return Err(Error::Invariant(format!("pair ({u}, {v}): distance {d}, cover {a}")));
                }
                if d > 0.0 {
                    w.0 = w.0.max(a / d);
                }
                w.1 = w.1.max(a - d);
            }
            Ok(w)
        })
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    Ok(worst.into_iter().fold((1.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1))))
}

/// Runs the checker for the artifact's kind and reports its measurements.
fn measure(o: &Opts, graph: &Path, artifact: &Path, td: Option<&Path>) -> Result<String> {
    let (g, _) = load(graph)?;
    let a = load_artifact(artifact)?;
    if a.n() != g.n() {
        bail!(Error::InvalidInput(format!("artifact has {} vertices, graph has {}", a.n(), g.n())));
    }
    let n = g.n();
    let sample = pairs(n, o.max_pairs, o.seed);
    let mut s = String::new();
    match &a {
        Artifact::Additive { t, hierarchy, partition, cover, .. } => {
            let h = check_hierarchy(&g, hierarchy)?;
            writeln!(s, "kind additive")?;
            writeln!(s, "hierarchy_depth {} (bound {})", h.depth, h.depth_bound)?;
            writeln!(s, "columns {}", h.columns)?;
            writeln!(s, "clusters {}", partition.clusters.len())?;
            writeln!(s, "forests {} (bound {})", cover.forests.len(), forest_bound(cover.eps, cover.width, cover.delta))?;
            writeln!(s, "trees {}", cover.tree_count())?;
            writeln!(s, "t {t}")?;
            match &sample {
                None => {
                    let oracle = ExactOracle::new(&g)?;
                    let p = verify_partition(&g, hierarchy, partition, usize::MAX, o.seed)?;
                    writeln!(s, "max_cluster_diameter {} (bound {})", p.max_diameter, p.diameter_bound)?;
                    writeln!(s, "max_hops {} (worst ratio to bound {})", p.max_cost, p.max_cost_ratio)?;
                    let r = verify_cover(&g, &oracle, cover)?;
                    writeln!(s, "pairs {}", r.pairs)?;
                    writeln!(s, "max_additive {} (bound {})", r.max_additive, r.additive_bound)?;
                    writeln!(s, "max_tree_diameter {}", r.max_tree_diameter)?;
                }
                Some(sample) => {
                    let trees = forests_to_trees(cover, n);
                    let idx = treecover::tree::TreeSetIndex::new(n, cover.forests.iter().flat_map(|f| f.trees.iter()));
                    let bound = cover.additive_bound();
                    let (_, add) = sampled_check(
                        &g,
                        sample,
                        |u, v| idx.min_distance(u, v).0,
                        |d| d + bound,
                        TOL * cover.delta.max(1.0),
                    )?;
                    writeln!(s, "sampled_pairs {}", sample.len())?;
                    writeln!(s, "max_additive {add} (bound {bound})")?;
                    writeln!(s, "hub_trees {}", trees.trees.len())?;
                }
            }
        }
        Artifact::Exact { depth, forests, .. } => {
            let trees: usize = forests.iter().map(|f| f.len()).sum();
            writeln!(s, "kind exact")?;
            writeln!(s, "depth {depth}")?;
            writeln!(s, "forests {}", forests.len())?;
            writeln!(s, "trees {trees}")?;
            let r = verify_exact(&g, forests)?;
            writeln!(s, "pairs {}", r.pairs)?;
            writeln!(s, "max_additive 0")?;
        }
        Artifact::Multiplicative { cover } => {
            let bound = 1.0 + cover.c() * cover.eps;
            writeln!(s, "kind multiplicative")?;
            writeln!(s, "trees {}", cover.cover.trees.len())?;
            writeln!(s, "hierarchies {}", cover.hppf.hierarchies.len())?;
            writeln!(s, "rho {}", cover.hppf.rho)?;
            writeln!(s, "mu {}", cover.hppf.mu)?;
            writeln!(s, "a {}", cover.a)?;
            writeln!(s, "c0 {}", cover.c0)?;
            writeln!(s, "c {}", cover.c())?;
            match &sample {
                None => {
                    let r = verify_mult(&ExactOracle::new(&g)?, cover)?;
                    writeln!(s, "pairs {}", r.pairs)?;
                    writeln!(s, "max_stretch {} (bound {})", r.max_stretch, r.stretch_bound)?;
                    writeln!(s, "min_tree_ratio {}", r.min_ratio)?;
                }
                Some(sample) => {
                    let oracle = build_oracle(&cover.cover)?;
                    let tol = TOL * cover.hppf.hierarchies[0].levels.last().map_or(1.0, |l| l.radius.max(1.0));
                    let (st, _) =
                        sampled_check(&g, sample, |u, v| oracle.query(u, v).unwrap_or(f64::INFINITY), |d| bound * d, tol)?;
                    writeln!(s, "sampled_pairs {}", sample.len())?;
                    writeln!(s, "max_stretch {st} (bound {bound})")?;
                }
            }
        }
        Artifact::TwPartition { eps, delta, width, partition, .. } => {
            let td = load_td(td.ok_or_else(|| Error::InvalidInput("--td is required for treewidth partitions".into()))?)?;
            let r = verify_tw_partition(&g, &td, partition, o.max_pairs.unwrap_or(usize::MAX), o.seed)?;
            writeln!(s, "kind tw-partition")?;
            writeln!(s, "eps {eps}")?;
            writeln!(s, "delta {delta}")?;
            writeln!(s, "width {width}")?;
            writeln!(s, "clusters {}", r.clusters)?;
            writeln!(s, "max_cluster_diameter {} (bound {})", r.max_diameter, r.diameter_bound)?;
            writeln!(s, "pairs {}", r.pairs)?;
            writeln!(s, "max_hops {} (bound {})", r.max_hops, r.hop_bound)?;
        }
        Artifact::TwEmbedding { eps, delta, embedding } => {
            writeln!(s, "kind tw-embedding")?;
            writeln!(s, "eps {eps}")?;
            writeln!(s, "delta {delta}")?;
            match &sample {
                None => {
                    let r = verify_embedding(&g, &ExactOracle::new(&g)?, embedding)?;
                    writeln!(s, "width {} (bound {})", r.width, r.bag_bound)?;
                    writeln!(s, "pairs {}", r.pairs)?;
                    writeln!(s, "max_additive {} (bound {})", r.max_additive, r.additive_bound)?;
                }
                Some(sample) => {
                    embedding.td.validate(&embedding.host)?;
                    if embedding.width() > embedding.bag_bound() {
                        bail!(Error::Invariant(format!("width {} exceeds {}", embedding.width(), embedding.bag_bound())));
                    }
                    let host = &embedding.host;
                    let bound = embedding.additive_bound;
                    let mut cache = std::collections::HashMap::new();
                    for &(u, _) in sample {
                        cache.entry(u).or_insert_with(|| dijkstra(host, u, None, None).dist);
                    }
                    let (_, add) = sampled_check(&g, sample, |u, v| cache[&u][v], |d| d + bound, TOL * delta.max(1.0))?;
                    writeln!(s, "width {} (bound {})", embedding.width(), embedding.bag_bound())?;
                    writeln!(s, "sampled_pairs {}", sample.len())?;
                    writeln!(s, "max_additive {add} (bound {bound})")?;
                }
            }
        }
    }
    Ok(s)
}
