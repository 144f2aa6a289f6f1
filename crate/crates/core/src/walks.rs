//! Random walks: explicit sampling, implicit walk-count matrices, and the
//! volume / conductance / containment quantities that tie walks to
//! communities.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::Graph;

/// Largest node count for which dense `n × n` walk matrices are built.
pub const DENSE_LIMIT: usize = 5000;

/// Row-stochastic transition probabilities `P(u, v) = w(u, v) / d_u`.
#[derive(Debug, Clone, Copy)]
pub struct TransitionModel<'g> {
    g: &'g Graph,
}

impl<'g> TransitionModel<'g> {
    pub fn new(g: &'g Graph) -> Self {
        TransitionModel { g }
    }

    pub fn probability(&self, u: usize, v: usize) -> f64 {
        match self.g.edge_weight(u, v) {
            Some(w) => w / self.g.weighted_degree(u),
            None => 0.0,
        }
    }

    /// Non-zero entries of row `u`.
    pub fn row(&self, u: usize) -> Vec<(usize, f64)> {
        let d = self.g.weighted_degree(u);
        self.g.weighted_neighbors(u).map(|(v, w)| (v, w / d)).collect()
    }

    /// Draw the next node of a walk at `u`; `None` for isolated nodes.
    /// `order` optionally lists the neighbors of `u` in the order the index
    /// draw refers to.
    fn step(&self, u: usize, order: Option<&[usize]>, rng: &mut ChaCha8Rng) -> Option<usize> {
        let nb = order.unwrap_or_else(|| self.g.neighbors(u));
        if nb.is_empty() {
            return None;
        }
        if !self.g.is_weighted() {
            return Some(nb[rng.random_range(0..nb.len())]);
        }
        let total = self.g.weighted_degree(u);
        let mut x = rng.random::<f64>() * total;
        for &v in nb {
            let w = self.g.edge_weight(u, v).unwrap();
            if x < w {
                return Some(v);
            }
            x -= w;
        }
        nb.last().copied()
    }
}

/// Number of walks started at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalksPerNode {
    Fixed(usize),
    /// As many walks as the node's (unweighted) degree.
    Degree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Nodes per walk (so `length - 1` transitions).
    pub length: usize,
    pub walks_per_node: WalksPerNode,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            length: 10,
            walks_per_node: WalksPerNode::Fixed(10),
            seed: 0,
        }
    }
}

/// Sampled walks over node ids (or, after mapping, over type ids).
#[derive(Debug, Clone, PartialEq)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<usize>>,
    pub length: usize,
    pub seed: u64,
    /// Walks cut short because their start node is isolated.
    pub truncated: usize,
}

impl WalkCorpus {
    pub fn from_walks(walks: Vec<Vec<usize>>) -> Self {
        let length = walks.iter().map(Vec::len).max().unwrap_or(0);
        WalkCorpus {
            walks,
            length,
            seed: 0,
            truncated: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    /// One walk per line, space-separated ids.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        for walk in &self.walks {
            let line: Vec<String> = walk.iter().map(usize::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut walks = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let walk = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::invalid(format!("line {}: bad id `{t}`", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            walks.push(walk);
        }
        Ok(WalkCorpus::from_walks(walks))
    }

    /// True when every pair of consecutive ids is an edge of `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.walks.iter().all(|w| {
            w.iter().all(|&u| u < g.node_count()) && w.windows(2).all(|p| g.has_edge(p[0], p[1]))
        })
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sample walks from every node. Each `(start, walk index)` pair owns an
/// independent random stream, so the corpus is identical for any thread count.
pub fn sample_walks(g: &Graph, cfg: &WalkConfig) -> Result<WalkCorpus> {
    sample_walks_with(g, cfg, Exec::default())
}

pub fn sample_walks_with(g: &Graph, cfg: &WalkConfig, exec: Exec) -> Result<WalkCorpus> {
    let order: Vec<usize> = (0..g.node_count()).collect();
    sample_in_order(g, cfg, &order, None, exec)
}

/// Sample walks with starts, streams and neighbor choices keyed by a
/// structure-only node ranking instead of node ids. `rank[u]` must be a
/// permutation of `0..n`. Relabeling the graph while carrying the ranking along
/// yields the same walks up to the relabeling.
pub fn sample_walks_ranked(
    g: &Graph,
    cfg: &WalkConfig,
    rank: &[usize],
    exec: Exec,
) -> Result<WalkCorpus> {
    let n = g.node_count();
    if rank.len() != n {
        return Err(Error::invalid("ranking length differs from node count"));
    }
    let mut order = vec![usize::MAX; n];
    for (u, &r) in rank.iter().enumerate() {
        if r >= n || order[r] != usize::MAX {
            return Err(Error::invalid("ranking is not a permutation"));
        }
        order[r] = u;
    }
    let sorted_nb: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let mut nb = g.neighbors(u).to_vec();
            nb.sort_by_key(|&v| rank[v]);
            nb
        })
        .collect();
    sample_in_order(g, cfg, &order, Some(&sorted_nb), exec)
}

fn sample_in_order(
    g: &Graph,
    cfg: &WalkConfig,
    order: &[usize],
    neighbor_order: Option<&[Vec<usize>]>,
    exec: Exec,
) -> Result<WalkCorpus> {
    if cfg.length < 2 {
        return Err(Error::invalid(format!("walk length must be >= 2, got {}", cfg.length)));
    }
    let model = TransitionModel::new(g);
    let counts: Vec<usize> = order
        .iter()
        .map(|&u| match cfg.walks_per_node {
            WalksPerNode::Fixed(k) => k,
            WalksPerNode::Degree => g.degree(u),
        })
        .collect();
    let per_start: Vec<Vec<Vec<usize>>> = exec.map(order.len(), |pos| {
        let start = order[pos];
        (0..counts[pos])
            .map(|j| {
                let key = ((pos as u64) << 32) | j as u64;
                let mut rng = stream_rng(cfg.seed, key);
                let mut walk = Vec::with_capacity(cfg.length);
                walk.push(start);
                let mut cur = start;
                while walk.len() < cfg.length {
                    let nb = neighbor_order.map(|o| o[cur].as_slice());
                    match model.step(cur, nb, &mut rng) {
                        Some(v) => {
                            walk.push(v);
                            cur = v;
                        }
                        None => break,
                    }
                }
                walk
            })
            .collect()
    });
    let walks: Vec<Vec<usize>> = per_start.into_iter().flatten().collect();
    let truncated = walks.iter().filter(|w| w.len() < cfg.length).count();
    if truncated > 0 {
        log::warn!("{truncated} walks started at isolated nodes and have length 1");
    }
    Ok(WalkCorpus {
        walks,
        length: cfg.length,
        seed: cfg.seed,
        truncated,
    })
}

/// Dense adjacency matrix (weighted entries when the graph is weighted).
pub fn adjacency_matrix(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge(format!("graph with {n} nodes"), DENSE_LIMIT));
    }
    let mut a = DMatrix::zeros(n, n);
    for u in 0..n {
        for (v, w) in g.weighted_neighbors(u) {
            a[(u, v)] = w;
        }
    }
    Ok(a)
}

/// `A^k`: entry `(i, j)` counts walks with `k` edges from `i` to `j`.
/// `k = 0` yields the identity.
pub fn walk_count_matrix(g: &Graph, k: usize) -> Result<DMatrix<f64>> {
    let a = adjacency_matrix(g)?;
    if k == 0 {
        log::info!("walk_count_matrix: k = 0 gives the identity");
        return Ok(DMatrix::identity(a.nrows(), a.ncols()));
    }
    let mut p = a.clone();
    for _ in 1..k {
        p = &p * &a;
    }
    Ok(p)
}

/// `A_k = A + A^2 + ... + A^k`.
pub fn walk_sum_matrix(g: &Graph, k: usize) -> Result<DMatrix<f64>> {
    if k == 0 {
        return Err(Error::invalid("walk_sum_matrix needs k >= 1"));
    }
    let a = adjacency_matrix(g)?;
    let mut power = a.clone();
    let mut sum = a.clone();
    for _ in 1..k {
        power = &power * &a;
        sum += &power;
    }
    Ok(sum)
}

/// `A^k x` without materialising any matrix, for graphs beyond the dense limit.
pub fn walk_count_apply(g: &Graph, k: usize, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != g.node_count() {
        return Err(Error::invalid("vector length differs from node count"));
    }
    let mut cur = x.to_vec();
    for _ in 0..k {
        cur = (0..g.node_count())
            .map(|u| g.weighted_neighbors(u).map(|(v, w)| w * cur[v]).sum())
            .collect();
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommunityStats {
    /// Sum of (weighted) degrees inside the set.
    pub volume: f64,
    /// Total weight of edges leaving the set.
    pub cut: f64,
    pub conductance: f64,
}

/// Volume, cut size and conductance `cut / min(vol(C), vol(V \ C))`.
pub fn community_stats(g: &Graph, members: &[usize]) -> Result<CommunityStats> {
    let n = g.node_count();
    let mut inside = vec![false; n];
    for &u in members {
        if u >= n {
            return Err(Error::invalid(format!("node {u} outside the graph")));
        }
        inside[u] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Err(Error::invalid("community must be a non-empty proper subset of V"));
    }
    let mut volume = 0.0;
    let mut total = 0.0;
    let mut cut = 0.0;
    for u in 0..n {
        let d = g.weighted_degree(u);
        total += d;
        if inside[u] {
            volume += d;
            cut += g
                .weighted_neighbors(u)
                .filter(|&(v, _)| !inside[v])
                .map(|(_, w)| w)
                .sum::<f64>();
        }
    }
    let denom = volume.min(total - volume);
    let conductance = if cut == 0.0 { 0.0 } else { cut / denom };
    Ok(CommunityStats {
        volume,
        cut,
        conductance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentBounds {
    /// `1 - ℓΦ/2`, clamped to `[0, 1]`.
    pub basic: f64,
    /// `(1 - Φ/2)^ℓ`.
    pub improved: f64,
}

/// Lower bounds on the probability that an `ℓ`-step walk started in a set of
/// conductance `phi` never leaves it.
pub fn containment_bounds(phi: f64, ell: usize) -> Result<ContainmentBounds> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::invalid(format!("conductance {phi} outside [0, 1]")));
    }
    if ell < 1 {
        return Err(Error::invalid("walk length must be >= 1"));
    }
    let l = ell as f64;
    Ok(ContainmentBounds {
        basic: (1.0 - l * phi / 2.0).clamp(0.0, 1.0),
        improved: (1.0 - phi / 2.0).powi(ell as i32).clamp(0.0, 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartDistribution {
    /// Start node drawn from the set proportionally to degree.
    DegreeProportional,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentOptions {
    pub start: StartDistribution,
    /// Lazy walks stay put with probability 1/2 at every step; the
    /// conductance bounds are statements about lazy walks.
    pub lazy: bool,
}

impl Default for ContainmentOptions {
    fn default() -> Self {
        ContainmentOptions {
            start: StartDistribution::DegreeProportional,
            lazy: true,
        }
    }
}

/// Monte Carlo estimate of the probability that an `ell`-step walk started in
/// `members` never leaves it.
pub fn estimate_containment(
    g: &Graph,
    members: &[usize],
    ell: usize,
    trials: usize,
    seed: u64,
    opts: ContainmentOptions,
) -> Result<f64> {
    estimate_containment_with(g, members, ell, trials, seed, opts, Exec::default())
}

pub fn estimate_containment_with(
    g: &Graph,
    members: &[usize],
    ell: usize,
    trials: usize,
    seed: u64,
    opts: ContainmentOptions,
    exec: Exec,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let n = g.node_count();
    if members.is_empty() || members.iter().any(|&u| u >= n) {
        return Err(Error::invalid("community must be a non-empty set of graph nodes"));
    }
    let mut inside = vec![false; n];
    for &u in members {
        inside[u] = true;
    }
    let weights: Vec<f64> = members
        .iter()
        .map(|&u| match opts.start {
            StartDistribution::DegreeProportional => g.weighted_degree(u),
            StartDistribution::Uniform => 1.0,
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let model = TransitionModel::new(g);

    let stayed: Vec<bool> = exec.map(trials, |t| {
        let mut rng = stream_rng(seed, t as u64);
        let mut cur = if total > 0.0 {
            let mut x = rng.random::<f64>() * total;
            let mut pick = *members.last().unwrap();
            for (i, &w) in weights.iter().enumerate() {
                if x < w {
                    pick = members[i];
                    break;
                }
                x -= w;
            }
            pick
        } else {
            members[rng.random_range(0..members.len())]
        };
        for _ in 0..ell {
            if opts.lazy && rng.random::<bool>() {
                continue;
            }
            match model.step(cur, None, &mut rng) {
                Some(v) if inside[v] => cur = v,
                Some(_) => return false,
                None => {}
            }
        }
        true
    });
    Ok(stayed.iter().filter(|&&s| s).count() as f64 / trials as f64)
}

/// Containment experiment record as emitted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub phi: f64,
    pub ell: usize,
    pub basic_bound: f64,
    pub improved_bound: f64,
    pub empirical: f64,
    pub trials: usize,
    pub seed: u64,
}

pub fn containment_experiment(
    g: &Graph,
    members: &[usize],
    ell: usize,
    trials: usize,
    seed: u64,
    opts: ContainmentOptions,
) -> Result<ContainmentReport> {
    let phi = if members.len() == g.node_count() {
        0.0
    } else {
        community_stats(g, members)?.conductance
    };
    let bounds = containment_bounds(phi, ell)?;
    let empirical = estimate_containment(g, members, ell, trials, seed, opts)?;
    Ok(ContainmentReport {
        phi,
        ell,
        basic_bound: bounds.basic,
        improved_bound: bounds.improved,
        empirical,
        trials,
        seed,
    })
}

/// Traversal count of every directed edge `(u, v)` across the corpus, indexed
/// like the CSR neighbor slots of `g` (slot `i` of `u` is `neighbors(u)[i]`).
pub fn directed_edge_traversals(g: &Graph, corpus: &WalkCorpus) -> Vec<Vec<usize>> {
    let mut counts: Vec<Vec<usize>> = (0..g.node_count()).map(|u| vec![0; g.degree(u)]).collect();
    for walk in &corpus.walks {
        for p in walk.windows(2) {
            if let Ok(i) = g.neighbors(p[0]).binary_search(&p[1]) {
                counts[p[0]][i] += 1;
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_barbell, gen_clique, gen_path, gen_star};

    fn single_edge() -> Graph {
        Graph::from_unweighted(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn rows_are_stochastic() {
        let g = Graph::from_weighted(3, &[(0, 1, 1.0), (1, 2, 3.0), (0, 2, 0.5)]).unwrap();
        let m = TransitionModel::new(&g);
        for u in 0..3 {
            let s: f64 = m.row(u).iter().map(|&(_, p)| p).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert_eq!(m.probability(1, 2), 0.75);
    }

    #[test]
    fn single_edge_walks_alternate() {
        let cfg = WalkConfig {
            length: 4,
            walks_per_node: WalksPerNode::Fixed(3),
            seed: 9,
        };
        let c = sample_walks(&single_edge(), &cfg).unwrap();
        assert_eq!(c.len(), 6);
        for w in &c.walks {
            assert_eq!(w.len(), 4);
            assert!(w.windows(2).all(|p| p[0] != p[1]));
        }
        assert_eq!(c.walks[0], vec![0, 1, 0, 1]);
    }

    #[test]
    fn triangle_walks_are_valid() {
        let g = gen_clique(3).unwrap();
        for seed in 0..5 {
            let cfg = WalkConfig {
                length: 3,
                walks_per_node: WalksPerNode::Fixed(4),
                seed,
            };
            assert!(sample_walks(&g, &cfg).unwrap().is_valid_for(&g));
        }
    }

    #[test]
    fn isolated_start_truncates() {
        let g = Graph::from_unweighted(3, &[(0, 1)]).unwrap();
        let c = sample_walks(&g, &WalkConfig::default()).unwrap();
        assert_eq!(c.truncated, 10);
        assert!(c.walks.iter().filter(|w| w[0] == 2).all(|w| w.len() == 1));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let (g, _) = gen_barbell(5).unwrap();
        let cfg = WalkConfig {
            length: 12,
            walks_per_node: WalksPerNode::Fixed(7),
            seed: 3,
        };
        let a = sample_walks_with(&g, &cfg, Exec::Sequential).unwrap();
        let b = sample_walks_with(&g, &cfg, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn corpus_text_round_trip() {
        let c = WalkCorpus::from_walks(vec![vec![0, 1, 2], vec![2, 1]]);
        let mut buf = Vec::new();
        c.write_text(&mut buf).unwrap();
        assert_eq!(String::from_utf8_lossy(&buf), "0 1 2\n2 1\n");
        assert_eq!(WalkCorpus::read_text(&buf[..]).unwrap().walks, c.walks);
    }

    #[test]
    fn path_walk_counts() {
        let g = gen_path(3).unwrap();
        let a2 = walk_count_matrix(&g, 2).unwrap();
        assert_eq!(a2[(0, 2)], 1.0);
        assert_eq!(a2[(0, 0)], 1.0);
        assert_eq!(a2[(0, 1)], 0.0);
        assert_eq!(walk_sum_matrix(&g, 1).unwrap(), adjacency_matrix(&g).unwrap());
        assert_eq!(walk_count_matrix(&g, 0).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn triangle_squared() {
        let a2 = walk_count_matrix(&gen_clique(3).unwrap(), 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a2[(i, j)], if i == j { 2.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn barbell_cube_blockwise() {
        // A^3 by repeated multiplication of the dense adjacency.
        let (g, part) = gen_barbell(5).unwrap();
        let a = adjacency_matrix(&g).unwrap();
        let oracle = &a * &a * &a;
        let a3 = walk_count_matrix(&g, 3).unwrap();
        assert_eq!(a3, oracle);
        let (mut intra_min, mut cross_max) = (f64::INFINITY, 0.0f64);
        for i in 0..10 {
            for j in 0..10 {
                if part.class_of(i) == part.class_of(j) {
                    intra_min = intra_min.min(a3[(i, j)]);
                } else {
                    cross_max = cross_max.max(a3[(i, j)]);
                }
            }
        }
        assert!(intra_min >= cross_max, "{intra_min} < {cross_max}");
    }

    #[test]
    fn disjoint_edges_never_connect() {
        let g = Graph::from_unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        let s = walk_sum_matrix(&g, 6).unwrap();
        for i in 0..2 {
            for j in 2..4 {
                assert_eq!(s[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn walk_apply_matches_dense() {
        let (g, _) = gen_barbell(4).unwrap();
        let x: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let dense = walk_count_matrix(&g, 3).unwrap() * nalgebra::DVector::from_vec(x.clone());
        let sparse = walk_count_apply(&g, 3, &x).unwrap();
        for i in 0..8 {
            assert_eq!(dense[i], sparse[i]);
        }
    }

    #[test]
    fn community_stats_examples() {
        let (g, part) = gen_barbell(5).unwrap();
        let s = community_stats(&g, &part.classes()[0]).unwrap();
        assert_eq!((s.volume, s.cut), (21.0, 1.0));
        assert!((s.conductance - 1.0 / 21.0).abs() < 1e-15);

        let two = Graph::from_unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(community_stats(&two, &[0, 1]).unwrap().conductance, 0.0);

        let star = gen_star(4).unwrap();
        let s = community_stats(&star, &[0]).unwrap();
        assert_eq!((s.volume, s.cut, s.conductance), (4.0, 4.0, 1.0));

        assert!(community_stats(&star, &[]).is_err());
        assert!(community_stats(&star, &[0, 1, 2, 3, 4]).is_err());
    }

    #[test]
    fn bound_examples() {
        let b = containment_bounds(1.0 / 21.0, 4).unwrap();
        assert!((b.basic - (1.0 - 2.0 / 21.0)).abs() < 1e-15);
        assert!((b.improved - (41.0f64 / 42.0).powi(4)).abs() < 1e-15);
        assert!((b.basic - 0.9048).abs() < 1e-4 && (b.improved - 0.9081).abs() < 1e-4);

        let z = containment_bounds(0.0, 17).unwrap();
        assert_eq!((z.basic, z.improved), (1.0, 1.0));

        let one = containment_bounds(1.0, 4).unwrap();
        assert_eq!(one.basic, 0.0);
        assert_eq!(one.improved, 0.0625);
    }

    #[test]
    fn containment_trivial_cases() {
        let two = Graph::from_unweighted(4, &[(0, 1), (2, 3)]).unwrap();
        let opts = ContainmentOptions::default();
        assert_eq!(estimate_containment(&two, &[0, 1], 8, 500, 1, opts).unwrap(), 1.0);
        let (g, _) = gen_barbell(5).unwrap();
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(estimate_containment(&g, &all, 8, 500, 1, opts).unwrap(), 1.0);
        assert!(estimate_containment(&g, &all, 8, 0, 1, opts).is_err());
    }

    #[test]
    fn barbell_containment_exceeds_basic_bound() {
        let (g, part) = gen_barbell(5).unwrap();
        let c = &part.classes()[0];
        let est = estimate_containment(&g, c, 4, 10_000, 5, ContainmentOptions::default()).unwrap();
        let b = containment_bounds(1.0 / 21.0, 4).unwrap();
        assert!(est >= b.basic - 0.01, "{est}");
    }

    #[test]
    fn edge_traversals_sum_to_transitions() {
        let (g, _) = gen_barbell(4).unwrap();
        let cfg = WalkConfig {
            length: 6,
            walks_per_node: WalksPerNode::Degree,
            seed: 2,
        };
        let c = sample_walks(&g, &cfg).unwrap();
        let total: usize = directed_edge_traversals(&g, &c).iter().flatten().sum();
        assert_eq!(total, c.len() * 5);
        assert_eq!(c.len(), 2 * g.edge_count());
    }
}
