mod output;

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::{info, warn};
use nalgebra::DMatrix;
use serde_json::json;

use roleprox::diagnostics::{diagnose, run_mechanism, scenario_suite_with, verdict_table, Mechanism, Thresholds};
use roleprox::diffusion::{
    diffuse, spectrum_check, verify_convergence_rw, verify_convergence_sym, Activation, Aggregator,
    DiffusionConfig, LaplacianForm, OperatorKind,
};
use roleprox::embedding::{
    embed_community_with, embed_diffusion, embed_factorized_roles, embed_implicit, embed_role_with,
    DiffusionEmbedConfig, EmbedConfig, Embedding, FactorizedRolesConfig, ImplicitConfig, ImplicitMode, Provenance,
};
use roleprox::equivalence::{
    exact_role_partition, regular_equivalence_partition, structural_equivalence_partition,
    verify_exact_role_assignment, verify_regular_assignment, verify_strong_structural_assignment,
    verify_structural_assignment, Neighborhood, StrongReading,
};
use roleprox::generators::*;
use roleprox::graph::load_edge_list;
use roleprox::graphlets::{count_orbits_with, graphlets_from_orbits, motif_graph, Graphlet, ORBIT_NAMES};
use roleprox::partition::build_role_graph;
use roleprox::walks::{
    containment_experiment, sample_walks_with, ContainmentOptions, StartDistribution, WalkConfig, WalksPerNode,
};
use roleprox::{Exec, FeatureMatrix, Graph, Partition};

use output::{write_json, Format, Table};

#[derive(Parser)]
#[command(name = "roleprox", version, about = "Community and role node embeddings with diagnostics")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Format of tabular outputs; reports are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Run kernels on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Barbell,
    Star,
    Clique,
    Bipartite,
    Path,
    Cycle,
    ErdosRenyi,
    ChungLu,
    DisjointStars,
    BorgattiEverett,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Operator {
    Rw,
    Sym,
    Theta,
    Gcn,
    Agg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Agg {
    Sum,
    Mean,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Reading {
    PerEdge,
    Universal,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph and its ground-truth partitions.
    Generate {
        #[arg(value_enum)]
        kind: GenKind,
        /// Clique size, leaf count, node count or first side, by kind.
        #[arg(long, default_value_t = 5)]
        size: usize,
        /// Second side of a bipartite graph, or copies of a star.
        #[arg(long, default_value_t = 2)]
        size2: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_value = "50,50")]
        blocks: Vec<usize>,
        #[arg(long, default_value_t = 0.9)]
        intra: f64,
        #[arg(long, default_value_t = 1.7)]
        exponent: f64,
    },
    /// Sample random walks; optionally measure containment in a node set.
    Walks {
        #[arg(long)]
        graph: PathBuf,
        /// Nodes per walk.
        #[arg(long, default_value_t = 10)]
        length: usize,
        /// Walks per start node, or `degree`.
        #[arg(long, default_value = "10")]
        per_node: String,
        /// Comma-separated node ids of a community.
        #[arg(long, value_delimiter = ',')]
        community: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        ell: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        non_lazy: bool,
        #[arg(long)]
        uniform_start: bool,
    },
    /// Propagate node features; optionally verify convergence and the spectrum.
    Diffuse {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Operator::Rw)]
        operator: Operator,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        /// Use `I - L` in place of `L` for the theta operator.
        #[arg(long)]
        i_minus_l: bool,
        #[arg(long, value_enum, default_value_t = Agg::Mean)]
        aggregator: Agg,
        /// CSV feature matrix with one row per node; random uniform columns otherwise.
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        random_cols: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 10_000)]
        t_max: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Per-node orbit counts and global graphlet counts.
    Graphlets {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        log1p: bool,
    },
    /// Weighted motif graph and its components.
    Motifgraph {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "4-clique")]
        motif: String,
        #[arg(long, default_value_t = 1)]
        min_count: u64,
        /// Weight every pair co-occurring in an instance, not just its edges.
        #[arg(long)]
        all_pairs: bool,
    },
    /// Node embedding by one mechanism.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "deepwalk")]
        mechanism: String,
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        walk_length: usize,
        #[arg(long, default_value_t = 10)]
        walks_per_node: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
        /// Walk-matrix power for the implicit mechanism.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        per_power: bool,
        #[arg(long, default_value_t = 2)]
        k_roles: usize,
        #[arg(long, default_value_t = 4)]
        bins: usize,
    },
    /// Equivalence partitions, and verification of a given role assignment.
    Equiv {
        #[arg(long)]
        graph: PathBuf,
        /// Role assignment as `node<TAB>class` TSV.
        #[arg(long)]
        roles: Option<PathBuf>,
        #[arg(long)]
        closed: bool,
        #[arg(long, value_enum, default_value_t = Reading::Universal)]
        reading: Reading,
    },
    /// Decide whether an embedding preserves communities or roles.
    Diagnose {
        #[arg(long)]
        graph: PathBuf,
        /// Embedding table written by `embed`.
        #[arg(long, conflicts_with = "mechanism")]
        embedding: Option<PathBuf>,
        /// Compute the embedding instead of reading one.
        #[arg(long)]
        mechanism: Option<String>,
        #[arg(long)]
        communities: PathBuf,
        #[arg(long)]
        roles: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        tau: f64,
        #[arg(long, default_value_t = 0.3)]
        rho: f64,
    },
    /// Every mechanism on the fixed scenario set.
    Suite {
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Exit with an error when an expected verdict is missed.
        #[arg(long)]
        strict: bool,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    std::fs::create_dir_all(&cli.out_dir).with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let ctx = Ctx { seed: cli.seed, dir: cli.out_dir.clone(), format: cli.format, exec };
    match cli.command {
        Command::Generate { kind, size, size2, p, blocks, intra, exponent } => {
            generate(&ctx, kind, size, size2, p, blocks, intra, exponent)
        }
        Command::Walks { graph, length, per_node, community, ell, trials, non_lazy, uniform_start } => {
            let g = load_graph(&graph)?;
            let opts = ContainmentOptions {
                start: if uniform_start { StartDistribution::Uniform } else { StartDistribution::DegreeProportional },
                lazy: !non_lazy,
            };
            walks(&ctx, &g, length, &per_node, &community, &ell, trials, opts)
        }
        Command::Diffuse { graph, operator, steps, theta, i_minus_l, aggregator, features, random_cols, verify, t_max, tol } => {
            let g = load_graph(&graph)?;
            let mut cfg = DiffusionConfig::new(
                match operator {
                    Operator::Rw => OperatorKind::RandomWalk,
                    Operator::Sym => OperatorKind::Symmetric,
                    Operator::Theta => OperatorKind::ThetaLaplacian,
                    Operator::Gcn => OperatorKind::GcnStep,
                    Operator::Agg => OperatorKind::Aggregator,
                },
                steps,
            );
            cfg.theta = theta;
            cfg.aggregator = match aggregator {
                Agg::Sum => Aggregator::Sum,
                Agg::Mean => Aggregator::Mean,
                Agg::Min => Aggregator::Min,
                Agg::Max => Aggregator::Max,
            };
            cfg.laplacian = if i_minus_l { LaplacianForm::IMinusL } else { LaplacianForm::Laplacian };
            cfg.activation = Activation::Relu;
            cfg.seed = ctx.seed;
            let x = match features {
                Some(p) => FeatureMatrix::read_csv(File::open(&p).with_context(|| format!("opening {}", p.display()))?)?,
                None => random_features(g.node_count(), random_cols, ctx.seed)?,
            };
            diffuse_cmd(&ctx, &g, &x, &cfg, verify, t_max, tol)
        }
        Command::Graphlets { graph, log1p } => graphlets(&ctx, &load_graph(&graph)?, log1p),
        Command::Motifgraph { graph, motif, min_count, all_pairs } => {
            let motif: Graphlet = motif.parse()?;
            motifgraph(&ctx, &load_graph(&graph)?, motif, min_count, all_pairs)
        }
        Command::Embed { graph, mechanism, dim, walk_length, walks_per_node, window, k, per_power, k_roles, bins } => {
            let g = load_graph(&graph)?;
            let mech: Mechanism = mechanism.parse()?;
            let cfg = EmbedConfig {
                walk_length,
                walks_per_node,
                window,
                dim,
                bins,
                seed: ctx.seed,
                ..Default::default()
            };
            let emb = match mech {
                Mechanism::Deepwalk => embed_community_with(&g, &cfg, ctx.exec)?,
                Mechanism::Role2vec => embed_role_with(&g, &cfg, ctx.exec)?,
                Mechanism::Implicit => embed_implicit(
                    &g,
                    &ImplicitConfig { k, dim, mode: if per_power { ImplicitMode::PerPower } else { ImplicitMode::Summed } },
                )?,
                Mechanism::RolesNmf => {
                    embed_factorized_roles(&g, &FactorizedRolesConfig { k_roles, seed: ctx.seed, ..Default::default() })?
                }
                Mechanism::Diffusion => {
                    embed_diffusion(&g, &DiffusionEmbedConfig { dim, seed: ctx.seed, ..Default::default() })?
                }
            };
            write_embedding(&ctx, &g, &emb)
        }
        Command::Equiv { graph, roles, closed, reading } => {
            let g = load_graph(&graph)?;
            let mode = if closed { Neighborhood::Closed } else { Neighborhood::Open };
            let reading = match reading {
                Reading::PerEdge => StrongReading::PerEdge,
                Reading::Universal => StrongReading::Universal,
            };
            let roles = roles.map(|p| read_partition(&p)).transpose()?;
            equiv(&ctx, &g, roles.as_ref(), mode, reading)
        }
        Command::Diagnose { graph, embedding, mechanism, communities, roles, tau, rho } => {
            let g = load_graph(&graph)?;
            let comms = read_partition(&communities)?;
            let roles = read_partition(&roles)?;
            let emb = match (embedding, mechanism) {
                (Some(p), _) => read_embedding(&p)?,
                (None, Some(m)) => run_mechanism(&g, m.parse()?, roles.class_count(), ctx.seed)?,
                (None, None) => bail!("pass --embedding or --mechanism"),
            };
            let report = diagnose(&g, &emb, &comms, &roles, Thresholds { tau, rho })?;
            write_json(&ctx.dir, "diagnosis.json", &report)?;
            println!(
                "verdict: {} (community {:.3}, role {:.3}, proximity {:.3})",
                report.verdict.name(),
                report.community_score,
                report.role_score,
                report.proximity_correlation
            );
            Ok(())
        }
        Command::Suite { seeds, strict } => suite(&ctx, seeds, strict),
    }
}

struct Ctx {
    seed: u64,
    dir: PathBuf,
    format: Format,
    exec: Exec,
}

/// Load an edge list. When the node tokens are exactly `0..n`, node ids follow
/// the tokens so partition files written alongside stay aligned.
fn load_graph(path: &Path) -> Result<Graph> {
    let g = load_edge_list(path)?;
    let n = g.node_count();
    let ids: Option<Vec<usize>> = (0..n).map(|u| g.label(u).parse::<usize>().ok()).collect();
    if let Some(ids) = ids {
        let mut seen = vec![false; n];
        if ids.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true)) {
            let labels = (0..n).map(|u| u.to_string()).collect();
            return Ok(g.permuted(&ids)?.with_labels(labels)?);
        }
    }
    Ok(g)
}

fn read_partition(path: &Path) -> Result<Partition> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Partition::read_tsv(BufReader::new(f))?)
}

fn write_partition(dir: &Path, name: &str, p: &Partition) -> Result<()> {
    let mut w = roleprox::io::create(dir.join(name))?;
    p.write_tsv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_graph(ctx: &Ctx, g: &Graph) -> Result<()> {
    let mut w = roleprox::io::create(ctx.dir.join("graph.edges"))?;
    roleprox::io::write_edge_list(g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn write_node_map(ctx: &Ctx, g: &Graph) -> Result<()> {
    let mut w = roleprox::io::create(ctx.dir.join("node_map.tsv"))?;
    roleprox::io::write_node_map(g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn node_ids(g: &Graph) -> Vec<String> {
    (0..g.node_count()).map(|u| g.label(u)).collect()
}

fn random_features(n: usize, cols: usize, seed: u64) -> Result<FeatureMatrix> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let data = DMatrix::from_fn(n, cols, |_, _| rng.random::<f64>());
    let labels = (0..cols).map(|j| format!("x{j}")).collect();
    Ok(FeatureMatrix::new(data, labels)?)
}

#[allow(clippy::too_many_arguments)]
fn generate(
    ctx: &Ctx,
    kind: GenKind,
    size: usize,
    size2: usize,
    p: f64,
    blocks: Vec<usize>,
    intra: f64,
    exponent: f64,
) -> Result<()> {
    let mut parts: Vec<(&str, Partition)> = Vec::new();
    let mut extra = json!({});
    let g = match kind {
        GenKind::Barbell => {
            let (g, cliques) = gen_barbell(size)?;
            parts.push(("communities.tsv", cliques));
            parts.push(("roles.tsv", regular_equivalence_partition(&g)));
            g
        }
        GenKind::Star => gen_star(size)?,
        GenKind::Clique => gen_clique(size)?,
        GenKind::Bipartite => {
            let g = gen_complete_bipartite(size, size2)?;
            parts.push(("roles.tsv", Partition::from_labels((0..size + size2).map(|u| usize::from(u >= size)).collect())?));
            g
        }
        GenKind::Path => gen_path(size)?,
        GenKind::Cycle => gen_cycle(size)?,
        GenKind::ErdosRenyi => gen_erdos_renyi(size, p, ctx.seed)?,
        GenKind::ChungLu => {
            let s = gen_block_chung_lu(&ChungLuConfig::new(blocks, intra, exponent, ctx.seed))?;
            parts.push(("communities.tsv", s.blocks));
            extra = json!({ "capped_pairs": s.capped_pairs, "rewired": s.rewired, "expected_degrees": s.expected_degrees });
            s.graph
        }
        GenKind::DisjointStars => {
            let (g, comps, roles) = gen_disjoint_stars(size2, size)?;
            parts.push(("communities.tsv", comps));
            parts.push(("roles.tsv", roles));
            g
        }
        GenKind::BorgattiEverett => {
            let (g, roles, comms) = borgatti_everett();
            parts.push(("communities.tsv", comms));
            parts.push(("roles.tsv", roles));
            g
        }
    };
    let isolated = g.isolated_nodes();
    if !isolated.is_empty() {
        warn!("{} isolated nodes cannot appear in the edge list", isolated.len());
    }
    write_graph(ctx, &g)?;
    for (name, p) in &parts {
        write_partition(&ctx.dir, name, p)?;
    }
    write_json(
        &ctx.dir,
        "generate.json",
        &json!({
            "kind": format!("{kind:?}"),
            "nodes": g.node_count(),
            "edges": g.edge_count(),
            "isolated": isolated.len(),
            "seed": ctx.seed,
            "details": extra,
        }),
    )?;
    println!("{} nodes, {} edges → {}", g.node_count(), g.edge_count(), ctx.dir.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn walks(
    ctx: &Ctx,
    g: &Graph,
    length: usize,
    per_node: &str,
    community: &[usize],
    ells: &[usize],
    trials: usize,
    opts: ContainmentOptions,
) -> Result<()> {
    let walks_per_node = if per_node == "degree" {
        WalksPerNode::Degree
    } else {
        WalksPerNode::Fixed(per_node.parse().with_context(|| format!("bad --per-node `{per_node}`"))?)
    };
    let cfg = WalkConfig { length, walks_per_node, seed: ctx.seed };
    let corpus = sample_walks_with(g, &cfg, ctx.exec)?;
    let mut w = roleprox::io::create(ctx.dir.join("walks.txt"))?;
    corpus.write_text(&mut w)?;
    w.flush()?;
    write_node_map(ctx, g)?;
    let mut report = json!({ "walks": corpus.len(), "length": length, "truncated": corpus.truncated, "seed": ctx.seed });
    if !community.is_empty() {
        let rows = ells
            .iter()
            .map(|&ell| containment_experiment(g, community, ell, trials, ctx.seed, opts))
            .collect::<roleprox::Result<Vec<_>>>()?;
        for r in &rows {
            println!(
                "ℓ={}: contained {:.4}, basic bound {:.4}, improved bound {:.4}",
                r.ell, r.empirical, r.basic_bound, r.improved_bound
            );
        }
        report["containment"] = json!(rows);
        report["containment_options"] = json!(opts);
    }
    write_json(&ctx.dir, "walks.json", &report)?;
    info!("{} walks written", corpus.len());
    Ok(())
}

fn diffuse_cmd(
    ctx: &Ctx,
    g: &Graph,
    x: &FeatureMatrix,
    cfg: &DiffusionConfig,
    verify: bool,
    t_max: usize,
    tol: f64,
) -> Result<()> {
    let y = diffuse(g, x, cfg)?;
    let header = std::iter::once("node_id".to_string()).chain(y.labels().iter().cloned()).collect();
    let rows = (0..y.nrows()).map(|i| y.row(i).iter().map(|v| v.to_string()).collect());
    Table::from_numeric(header, &node_ids(g), rows).write(&ctx.dir, "diffused", ctx.format)?;
    if verify {
        let rw = verify_convergence_rw(g, x, t_max, tol)?;
        let sym = verify_convergence_sym(g, x, t_max, tol)?;
        println!("random-walk: converged={} t={} analytic_match={}", rw.converged, rw.t_reached, rw.analytic_match);
        println!("symmetric: converged={} t={} analytic_match={}", sym.converged, sym.t_reached, sym.analytic_match);
        write_json(&ctx.dir, "convergence.json", &json!({ "random_walk": rw, "symmetric": sym }))?;
        let spec = spectrum_check(g)?;
        println!("spectrum in [{:.6}, {:.6}], consistent={}", spec.min, spec.max, spec.consistent);
        write_json(&ctx.dir, "spectrum.json", &spec)?;
    }
    write_json(&ctx.dir, "diffuse.json", cfg)?;
    Ok(())
}

fn graphlets(ctx: &Ctx, g: &Graph, log1p: bool) -> Result<()> {
    let counts = count_orbits_with(g, ctx.exec);
    let header = std::iter::once("node_id".to_string()).chain(ORBIT_NAMES.iter().map(|s| s.to_string())).collect();
    let rows = counts.rows().iter().map(|r| {
        r.iter()
            .map(|&c| if log1p { (c as f64).ln_1p().to_string() } else { c.to_string() })
            .collect()
    });
    Table::from_numeric(header, &node_ids(g), rows).write(&ctx.dir, "orbits", ctx.format)?;
    let global = graphlets_from_orbits(&counts);
    let by_name: HashMap<&str, u64> = Graphlet::ALL.iter().map(|h| (h.name(), global[h.id()])).collect();
    for h in Graphlet::ALL {
        println!("{:<10}{}", h.name(), global[h.id()]);
    }
    write_json(&ctx.dir, "graphlets.json", &by_name)?;
    Ok(())
}

fn motifgraph(ctx: &Ctx, g: &Graph, motif: Graphlet, min_count: u64, all_pairs: bool) -> Result<()> {
    let mg = motif_graph(g, motif, min_count, all_pairs)?;
    let mut w = roleprox::io::create(ctx.dir.join("motif.edges"))?;
    mg.write_edges(&mut w)?;
    w.flush()?;
    write_partition(&ctx.dir, "motif_components.tsv", &mg.components)?;
    write_json(
        &ctx.dir,
        "motifgraph.json",
        &json!({
            "motif": motif.name(),
            "min_count": min_count,
            "all_pairs": all_pairs,
            "edges": mg.edges.len(),
            "components": mg.component_count(),
            "nontrivial_components": mg.nontrivial_components(),
        }),
    )?;
    println!(
        "{}: {} weighted edges, {} components ({} non-trivial)",
        motif.name(),
        mg.edges.len(),
        mg.component_count(),
        mg.nontrivial_components()
    );
    Ok(())
}

fn write_embedding(ctx: &Ctx, g: &Graph, emb: &Embedding) -> Result<()> {
    let header = std::iter::once("node_id".to_string()).chain((0..emb.dim()).map(|j| format!("dim_{j}"))).collect();
    let rows = (0..emb.n()).map(|i| emb.row(i).iter().map(|v| v.to_string()).collect());
    let path = Table::from_numeric(header, &node_ids(g), rows).write(&ctx.dir, "embedding", ctx.format)?;
    let mut w = roleprox::io::create(ctx.dir.join("embedding.meta.json"))?;
    emb.write_meta_json(&mut w)?;
    w.flush()?;
    write_node_map(ctx, g)?;
    println!("{} × {} {} embedding → {}", emb.n(), emb.dim(), emb.provenance.name(), path.display());
    Ok(())
}

/// Rows are taken in file order; `node_id` is only checked to be present.
fn read_embedding(path: &Path) -> Result<Embedding> {
    let t = Table::read(path)?;
    let id_col = t.header.iter().position(|h| h == "node_id");
    let dims: Vec<usize> = (0..t.header.len()).filter(|&j| Some(j) != id_col).collect();
    if dims.is_empty() || t.rows.is_empty() {
        bail!("{} has no embedding values", path.display());
    }
    let mut values = Vec::with_capacity(t.rows.len() * dims.len());
    for (i, row) in t.rows.iter().enumerate() {
        for &j in &dims {
            let cell = row.get(j).map(String::as_str).unwrap_or("");
            values.push(cell.parse::<f64>().with_context(|| format!("row {}: `{cell}` is not a number", i + 1))?);
        }
    }
    let data = DMatrix::from_row_slice(t.rows.len(), dims.len(), &values);
    Ok(Embedding::new(data, Provenance::DeepWalk, json!({ "source": path.display().to_string() }))?)
}

fn equiv(ctx: &Ctx, g: &Graph, roles: Option<&Partition>, mode: Neighborhood, reading: StrongReading) -> Result<()> {
    let s = structural_equivalence_partition(g, mode);
    let e = exact_role_partition(g);
    let r = regular_equivalence_partition(g);
    write_partition(&ctx.dir, "structural.tsv", &s)?;
    write_partition(&ctx.dir, "exact.tsv", &e)?;
    write_partition(&ctx.dir, "regular.tsv", &r)?;
    write_node_map(ctx, g)?;
    let mut report = json!({
        "classes": { "structural": s.class_count(), "exact": e.class_count(), "regular": r.class_count() },
        "structural_refines_exact": s.refines(&e),
        "exact_refines_regular": e.refines(&r),
    });
    println!("structural {} / exact {} / regular {} classes", s.class_count(), e.class_count(), r.class_count());
    if let Some(roles) = roles {
        let rg = build_role_graph(g, roles)?;
        let checks = vec![
            verify_structural_assignment(g, roles, mode)?,
            verify_exact_role_assignment(g, roles)?,
            verify_regular_assignment(g, roles)?,
            verify_strong_structural_assignment(g, roles, &rg, reading)?,
        ];
        for c in &checks {
            let why = c.witness.as_ref().map(|w| format!(" ({})", w.condition)).unwrap_or_default();
            println!("{:?}: {}{why}", c.kind, if c.holds { "holds" } else { "fails" });
        }
        report["given_roles"] = json!(checks);
    }
    write_json(&ctx.dir, "equiv.json", &report)?;
    Ok(())
}

fn suite(ctx: &Ctx, seeds: u64, strict: bool) -> Result<()> {
    let mut all = Vec::new();
    let mut misses = 0;
    let mut table = String::new();
    for seed in ctx.seed..ctx.seed + seeds {
        let cells = scenario_suite_with(seed, ctx.exec)?;
        misses += cells.iter().filter(|c| !c.agrees()).count();
        table.push_str(&format!("seed {seed}\n{}\n", verdict_table(&cells)));
        all.push(json!({ "seed": seed, "cells": cells }));
    }
    print!("{table}");
    std::fs::write(ctx.dir.join("verdicts.txt"), &table)?;
    write_json(&ctx.dir, "suite.json", &all)?;
    println!("expected verdicts missed: {misses}");
    if strict && misses > 0 {
        bail!("{misses} expected verdicts missed");
    }
    Ok(())
}
