//! Deterministic synthetic graphs used throughout the crate and its tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::{Partition, RoleAssignment};

/// Two `m`-cliques joined by the bridge `(m-1, m)`. The partition is the two
/// cliques.
pub fn gen_barbell(m: usize) -> Result<(Graph, Partition)> {
    if m < 3 {
        return Err(Error::invalid(format!("barbell clique size must be >= 3, got {m}")));
    }
    let mut edges = Vec::with_capacity(m * (m - 1) + 1);
    for block in 0..2 {
        let base = block * m;
        for i in 0..m {
            for j in i + 1..m {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.push((m - 1, m));
    let g = Graph::from_unweighted(2 * m, &edges)?;
    let part = Partition::from_labels((0..2 * m).map(|u| u / m).collect())?;
    Ok((g, part))
}

/// The two endpoints of the barbell bridge.
pub fn barbell_bridge(m: usize) -> (usize, usize) {
    (m - 1, m)
}

/// Star with hub `0` and leaves `1..=leaves`.
pub fn gen_star(leaves: usize) -> Result<Graph> {
    if leaves < 1 {
        return Err(Error::invalid("a star needs at least one leaf"));
    }
    let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
    Graph::from_unweighted(leaves + 1, &edges)
}

pub fn gen_clique(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::invalid(format!("clique size must be >= 2, got {k}")));
    }
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            edges.push((i, j));
        }
    }
    Graph::from_unweighted(k, &edges)
}

/// `K_{a,b}` with the left block `0..a` and the right block `a..a+b`.
pub fn gen_complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a < 1 || b < 1 {
        return Err(Error::invalid("both sides of a complete bipartite graph need a node"));
    }
    let mut edges = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    Graph::from_unweighted(a + b, &edges)
}

pub fn gen_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid("a path needs at least two nodes"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_unweighted(n, &edges)
}

pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid("a cycle needs at least three nodes"));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_unweighted(n, &edges)
}

/// `G(n, p)` with a seeded generator.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_unweighted(n, &edges)
}

/// `copies` disjoint stars with `leaves` leaves each; the partition is the
/// components, the role assignment is {hubs}, {leaves}.
pub fn gen_disjoint_stars(copies: usize, leaves: usize) -> Result<(Graph, Partition, RoleAssignment)> {
    let star = gen_star(leaves)?;
    let parts: Vec<&Graph> = std::iter::repeat_n(&star, copies).collect();
    let g = Graph::disjoint_union(&parts)?;
    let size = leaves + 1;
    let comps = Partition::from_labels((0..g.node_count()).map(|u| u / size).collect())?;
    let roles =
        Partition::from_labels((0..g.node_count()).map(|u| usize::from(u % size != 0)).collect())?;
    Ok((g, comps, roles))
}

/// A small two-department network in the style of the classical
/// Borgatti-Everett role example.
///
/// Two hubs (`0`, `1`) are joined by an edge; each hub manages three middle
/// nodes, and every middle node has one private leaf. The returned role
/// assignment {hubs}, {middles}, {leaves} is exact: every node of a role sees
/// the same multiset of neighbor roles. The community partition is the two
/// departments.
pub fn borgatti_everett() -> (Graph, RoleAssignment, Partition) {
    let mut edges = vec![(0, 1)];
    for (hub, mids) in [(0usize, [2usize, 3, 4]), (1, [5, 6, 7])] {
        for m in mids {
            edges.push((hub, m));
            edges.push((m, m + 6));
        }
    }
    let g = Graph::from_unweighted(14, &edges).expect("fixture is a valid graph");
    let roles = Partition::from_labels(
        (0..14)
            .map(|u| match u {
                0 | 1 => 0,
                2..=7 => 1,
                _ => 2,
            })
            .collect(),
    )
    .expect("fixture roles are surjective");
    let comms = Partition::from_labels(
        (0..14)
            .map(|u| match u {
                0 | 2..=4 | 8..=10 => 0,
                _ => 1,
            })
            .collect(),
    )
    .expect("fixture communities are surjective");
    (g, roles, comms)
}

/// Parameters of the block Chung-Lu generator.
#[derive(Debug, Clone)]
pub struct ChungLuConfig {
    pub block_sizes: Vec<usize>,
    /// Share of each node's expected degree routed inside its own block.
    pub intra_weight: f64,
    /// Power-law exponent of the expected-degree distribution.
    pub degree_exponent: f64,
    pub min_degree: f64,
    /// Upper cut-off for expected degrees; defaults to `2 * sqrt(n)`.
    pub max_degree: Option<f64>,
    pub seed: u64,
}

impl ChungLuConfig {
    pub fn new(block_sizes: Vec<usize>, intra_weight: f64, degree_exponent: f64, seed: u64) -> Self {
        ChungLuConfig {
            block_sizes,
            intra_weight,
            degree_exponent,
            min_degree: 2.0,
            max_degree: None,
            seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChungLuSample {
    pub graph: Graph,
    pub blocks: Partition,
    pub expected_degrees: Vec<f64>,
    /// Node pairs whose probability exceeded 1 and was capped.
    pub capped_pairs: usize,
    /// Isolated nodes that were wired to a random same-block node.
    pub rewired: usize,
}

/// Block Chung-Lu graph.
///
/// Expected degrees `w` follow a truncated power law. A pair `(u, v)` links
/// with probability `q * w_u w_v / W_b + (1 - q) * w_u w_v / W`, where `q` is
/// the intra-block weight, `W_b` the weight of the shared block (only when
/// `u, v` share one) and `W` the total weight, so every node keeps its
/// expected degree.
pub fn gen_block_chung_lu(cfg: &ChungLuConfig) -> Result<ChungLuSample> {
    if cfg.block_sizes.is_empty() || cfg.block_sizes.iter().any(|&b| b < 2) {
        return Err(Error::invalid("every block needs at least two nodes"));
    }
    if !(cfg.degree_exponent > 1.0) {
        return Err(Error::invalid(format!(
            "degree exponent must exceed 1, got {}",
            cfg.degree_exponent
        )));
    }
    if !(0.0..=1.0).contains(&cfg.intra_weight) {
        return Err(Error::invalid(format!(
            "intra-block weight {} outside [0, 1]",
            cfg.intra_weight
        )));
    }
    let n: usize = cfg.block_sizes.iter().sum();
    let w_max = cfg.max_degree.unwrap_or(2.0 * (n as f64).sqrt());
    if !(cfg.min_degree > 0.0 && w_max >= cfg.min_degree) {
        return Err(Error::invalid("degree bounds must satisfy 0 < min <= max"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let block_of: Vec<usize> = cfg
        .block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let alpha = cfg.degree_exponent - 1.0;
    let weights: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            (cfg.min_degree * (1.0 - u).powf(-1.0 / alpha)).min(w_max)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let mut block_total = vec![0.0; cfg.block_sizes.len()];
    for (u, &w) in weights.iter().enumerate() {
        block_total[block_of[u]] += w;
    }

    let q = cfg.intra_weight;
    let mut edges = Vec::new();
    let mut capped = 0;
    for u in 0..n {
        for v in u + 1..n {
            let prod = weights[u] * weights[v];
            let mut p = (1.0 - q) * prod / total;
            if block_of[u] == block_of[v] {
                p += q * prod / block_total[block_of[u]];
            }
            if p > 1.0 {
                capped += 1;
                p = 1.0;
            }
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    if capped > 0 {
        log::warn!("block Chung-Lu: {capped} pair probabilities exceeded 1 and were capped");
    }

    let mut deg = vec![0usize; n];
    for &(u, v) in &edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let starts: Vec<usize> = {
        let mut s = vec![0];
        for &b in &cfg.block_sizes {
            s.push(s.last().unwrap() + b);
        }
        s
    };
    let mut rewired = 0;
    for u in 0..n {
        if deg[u] > 0 {
            continue;
        }
        let b = block_of[u];
        let size = cfg.block_sizes[b];
        let mut v = starts[b] + rng.random_range(0..size - 1);
        if v >= u {
            v += 1;
        }
        edges.push((u, v));
        deg[u] += 1;
        deg[v] += 1;
        rewired += 1;
    }

    Ok(ChungLuSample {
        graph: Graph::from_unweighted(n, &edges)?,
        blocks: Partition::from_labels(block_of)?,
        expected_degrees: weights,
        capped_pairs: capped,
        rewired,
    })
}
