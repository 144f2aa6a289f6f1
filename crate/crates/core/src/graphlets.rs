//! Exact induced graphlet and orbit counts for connected graphlets on 2–4
//! nodes, and weighted motif graphs.
//!
//! Orbit ordering used throughout (column `i` of [`OrbitCounts`]):
//!
//! | orbit | graphlet | position |
//! |---|---|---|
//! | 0 | edge | endpoint |
//! | 1 | 2-path | end |
//! | 2 | 2-path | center |
//! | 3 | triangle | any |
//! | 4 | 3-path | end |
//! | 5 | 3-path | interior |
//! | 6 | star | leaf |
//! | 7 | star | center |
//! | 8 | 4-cycle | any |
//! | 9 | paw | pendant node |
//! | 10 | paw | degree-2 triangle node |
//! | 11 | paw | degree-3 node |
//! | 12 | diamond | degree-2 node |
//! | 13 | diamond | degree-3 node |
//! | 14 | 4-clique | any |
//!
//! Weights are ignored: counts depend on the edge set only.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::features::FeatureMatrix;
use crate::graph::Graph;
use crate::partition::Partition;

pub const ORBITS: usize = 15;

pub const ORBIT_NAMES: [&str; ORBITS] = [
    "o0_edge",
    "o1_path2_end",
    "o2_path2_center",
    "o3_triangle",
    "o4_path3_end",
    "o5_path3_interior",
    "o6_star_leaf",
    "o7_star_center",
    "o8_cycle4",
    "o9_paw_pendant",
    "o10_paw_side",
    "o11_paw_center",
    "o12_diamond_side",
    "o13_diamond_chord",
    "o14_clique4",
];

/// The nine connected graphlets on 2–4 nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Graphlet {
    Edge,
    Path2,
    Triangle,
    Path3,
    Star,
    Cycle4,
    Paw,
    Diamond,
    Clique4,
}

impl Graphlet {
    pub const ALL: [Graphlet; 9] = [
        Graphlet::Edge,
        Graphlet::Path2,
        Graphlet::Triangle,
        Graphlet::Path3,
        Graphlet::Star,
        Graphlet::Cycle4,
        Graphlet::Paw,
        Graphlet::Diamond,
        Graphlet::Clique4,
    ];

    pub fn id(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Graphlet::Edge => "edge",
            Graphlet::Path2 => "2-path",
            Graphlet::Triangle => "triangle",
            Graphlet::Path3 => "3-path",
            Graphlet::Star => "star",
            Graphlet::Cycle4 => "4-cycle",
            Graphlet::Paw => "paw",
            Graphlet::Diamond => "diamond",
            Graphlet::Clique4 => "4-clique",
        }
    }

    pub fn node_count(self) -> usize {
        match self {
            Graphlet::Edge => 2,
            Graphlet::Path2 | Graphlet::Triangle => 3,
            _ => 4,
        }
    }

    /// Classify a connected induced subgraph by node count, edge count and
    /// maximum degree.
    fn classify(nodes: usize, edges: usize, max_degree: usize) -> Graphlet {
        match (nodes, edges) {
            (2, _) => Graphlet::Edge,
            (3, 2) => Graphlet::Path2,
            (3, _) => Graphlet::Triangle,
            (4, 3) if max_degree == 3 => Graphlet::Star,
            (4, 3) => Graphlet::Path3,
            (4, 4) if max_degree == 3 => Graphlet::Paw,
            (4, 4) => Graphlet::Cycle4,
            (4, 5) => Graphlet::Diamond,
            _ => Graphlet::Clique4,
        }
    }
}

impl fmt::Display for Graphlet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Graphlet {
    type Err = Error;

    /// Accepts the canonical names, `G0`..`G8`, and a few common aliases
    /// (`4-star`/`claw` for the star, `k4` for the 4-clique, `tailed-triangle`
    /// for the paw, `4-path` for the 3-path).
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        if let Some(i) = key.strip_prefix('g').and_then(|d| d.parse::<usize>().ok()) {
            return Graphlet::ALL
                .get(i)
                .copied()
                .ok_or_else(|| Error::invalid(format!("unknown motif id `{s}`")));
        }
        let g = match key.as_str() {
            "edge" => Graphlet::Edge,
            "2-path" | "wedge" => Graphlet::Path2,
            "triangle" => Graphlet::Triangle,
            "3-path" | "4-path" => Graphlet::Path3,
            "star" | "3-star" | "4-star" | "claw" => Graphlet::Star,
            "4-cycle" | "cycle" | "square" => Graphlet::Cycle4,
            "paw" | "tailed-triangle" => Graphlet::Paw,
            "diamond" => Graphlet::Diamond,
            "4-clique" | "k4" | "clique" => Graphlet::Clique4,
            _ => return Err(Error::invalid(format!("unknown motif id `{s}`"))),
        };
        Ok(g)
    }
}

/// Graphlet and multiplicity of each orbit (nodes in that orbit per instance).
pub const ORBIT_GRAPHLET: [(Graphlet, u64); ORBITS] = [
    (Graphlet::Edge, 2),
    (Graphlet::Path2, 2),
    (Graphlet::Path2, 1),
    (Graphlet::Triangle, 3),
    (Graphlet::Path3, 2),
    (Graphlet::Path3, 2),
    (Graphlet::Star, 3),
    (Graphlet::Star, 1),
    (Graphlet::Cycle4, 4),
    (Graphlet::Paw, 1),
    (Graphlet::Paw, 2),
    (Graphlet::Paw, 1),
    (Graphlet::Diamond, 2),
    (Graphlet::Diamond, 2),
    (Graphlet::Clique4, 4),
];

/// Per-node orbit counts, `n × 15`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCounts {
    rows: Vec<[u64; ORBITS]>,
}

impl OrbitCounts {
    pub fn from_rows(rows: Vec<[u64; ORBITS]>) -> Self {
        OrbitCounts { rows }
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, u: usize) -> &[u64; ORBITS] {
        &self.rows[u]
    }

    pub fn rows(&self) -> &[[u64; ORBITS]] {
        &self.rows
    }

    pub fn get(&self, u: usize, orbit: usize) -> u64 {
        self.rows[u][orbit]
    }

    pub fn column_sums(&self) -> [u64; ORBITS] {
        let mut s = [0u64; ORBITS];
        for r in &self.rows {
            for (acc, x) in s.iter_mut().zip(r) {
                *acc += x;
            }
        }
        s
    }

    pub fn to_features(&self) -> FeatureMatrix {
        let data = DMatrix::from_fn(self.rows.len(), ORBITS, |i, j| self.rows[i][j] as f64);
        FeatureMatrix::new(data, ORBIT_NAMES.iter().map(|s| s.to_string()).collect())
            .expect("orbit counts are finite")
    }

    /// CSV with the orbit names as header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(ORBIT_NAMES)?;
        for r in &self.rows {
            out.write_record(r.iter().map(u64::to_string))?;
        }
        out.flush()?;
        Ok(())
    }
}

fn common_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn choose2(x: i64) -> i64 {
    x * (x - 1) / 2
}

fn choose3(x: i64) -> i64 {
    x * (x - 1) * (x - 2) / 6
}

/// Exact orbit counts for every node.
pub fn count_orbits(g: &Graph) -> OrbitCounts {
    count_orbits_with(g, Exec::default())
}

/// Orbit counts from neighborhood statistics: non-induced pattern counts per
/// node are computed from degrees, triangles and common-neighbor counts, then
/// the induced counts are recovered by subtracting the overlaps between
/// patterns. The 4-clique count is enumerated directly.
pub fn count_orbits_with(g: &Graph, exec: Exec) -> OrbitCounts {
    let n = g.node_count();
    let deg: Vec<i64> = (0..n).map(|u| g.degree(u) as i64).collect();
    let tri: Vec<i64> = exec.map(n, |v| {
        let nb = g.neighbors(v);
        nb.iter().map(|&u| common_count(nb, g.neighbors(u)) as i64).sum::<i64>() / 2
    });
    let s: Vec<i64> = (0..n)
        .map(|a| g.neighbors(a).iter().map(|&b| deg[b] - 1).sum())
        .collect();

    let rows = exec.map(n, |v| {
        let nb = g.neighbors(v);
        let d = deg[v];
        let t = tri[v];

        let mut cn_uv = Vec::with_capacity(nb.len());
        for &u in nb {
            cn_uv.push(common_count(nb, g.neighbors(u)) as i64);
        }

        let o0 = d;
        let o3 = t;
        let o2 = choose2(d) - t;
        let o1 = nb.iter().map(|&u| deg[u] - 1).sum::<i64>() - 2 * t;

        // 4-cycles through v, by the opposite node w.
        let mut two_paths: Vec<usize> = Vec::new();
        for &a in nb {
            two_paths.extend(g.neighbors(a).iter().copied().filter(|&w| w != v));
        }
        two_paths.sort_unstable();
        let mut n_c4 = 0i64;
        let mut i = 0;
        while i < two_paths.len() {
            let mut j = i;
            while j < two_paths.len() && two_paths[j] == two_paths[i] {
                j += 1;
            }
            n_c4 += choose2((j - i) as i64);
            i = j;
        }

        let mut n_d3 = 0i64;
        let mut n_pt = 0i64;
        let mut n_sl = 0i64;
        let mut n_pi = 0i64;
        for (idx, &u) in nb.iter().enumerate() {
            let c = cn_uv[idx];
            n_d3 += choose2(c);
            n_pt += tri[u] - c;
            n_sl += choose2(deg[u] - 1);
            n_pi += (d - 1) * (deg[u] - 1);
        }
        n_pi -= 2 * t;

        let mut n_d2 = 0i64;
        let mut n_p2 = 0i64;
        let mut k4_times3 = 0i64;
        for (ia, &a) in nb.iter().enumerate() {
            let na = g.neighbors(a);
            for &b in &nb[ia + 1..] {
                if na.binary_search(&b).is_err() {
                    continue;
                }
                let nbb = g.neighbors(b);
                n_d2 += common_count(na, nbb) as i64 - 1;
                n_p2 += (deg[a] - 2) + (deg[b] - 2);
                k4_times3 += nb
                    .iter()
                    .filter(|&&w| w != a && w != b)
                    .filter(|&&w| na.binary_search(&w).is_ok() && nbb.binary_search(&w).is_ok())
                    .count() as i64;
            }
        }
        // Each 4-clique is seen from its three node pairs in N(v), and each
        // time its fourth node is found once.
        let o14 = k4_times3 / 3;

        let n_pc = t * (d - 2).max(0);
        let n_sc = choose3(d);
        let n_pe = nb.iter().map(|&a| s[a]).sum::<i64>() - d * (d - 1) - 2 * t;

        let o13 = n_d3 - 3 * o14;
        let o12 = n_d2 - 3 * o14;
        let o8 = n_c4 - o12 - o13 - 3 * o14;
        let o11 = n_pc - 2 * o13 - 3 * o14;
        let o9 = n_pt - 2 * o12 - 3 * o14;
        let o10 = n_p2 - 2 * o12 - 2 * o13 - 6 * o14;
        let o7 = n_sc - o11 - o13 - o14;
        let o6 = n_sl - o9 - o10 - 2 * o12 - o13 - 3 * o14;
        let o4 = n_pe - 2 * o8 - 2 * o9 - o10 - 4 * o12 - 2 * o13 - 6 * o14;
        let o5 = n_pi - 2 * o8 - o10 - 2 * o11 - 2 * o12 - 4 * o13 - 6 * o14;

        let row = [
            o0, o1, o2, o3, o4, o5, o6, o7, o8, o9, o10, o11, o12, o13, o14,
        ];
        let mut out = [0u64; ORBITS];
        for (dst, &x) in out.iter_mut().zip(&row) {
            debug_assert!(x >= 0, "negative orbit count at node {v}: {row:?}");
            *dst = x.max(0) as u64;
        }
        out
    });
    OrbitCounts { rows }
}

/// Induced counts of each of the nine graphlets, derived from orbit column
/// sums.
pub fn count_graphlets_global(g: &Graph) -> [u64; 9] {
    graphlets_from_orbits(&count_orbits(g))
}

pub fn graphlets_from_orbits(counts: &OrbitCounts) -> [u64; 9] {
    let sums = counts.column_sums();
    let pick = |orbit: usize| sums[orbit] / ORBIT_GRAPHLET[orbit].1;
    [
        pick(0),
        pick(2),
        pick(3),
        pick(5),
        pick(7),
        pick(8),
        pick(11),
        pick(13),
        pick(14),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    None,
    Log1p,
}

/// Orbit counts as real features, optionally `ln(1 + x)`-transformed.
pub fn orbit_feature_matrix(g: &Graph, transform: Transform) -> FeatureMatrix {
    let raw = count_orbits(g).to_features();
    match transform {
        Transform::None => raw,
        Transform::Log1p => raw.log1p().expect("counts are nonnegative"),
    }
}

/// Call `f` once for every connected node subset of size `k` (2..=4).
pub fn for_each_connected_subset(g: &Graph, k: usize, mut f: impl FnMut(&[usize])) {
    fn extend(
        g: &Graph,
        k: usize,
        root: usize,
        sub: &mut Vec<usize>,
        mut ext: Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if sub.len() == k {
            f(sub);
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in g.neighbors(w) {
                if u > root
                    && !sub.contains(&u)
                    && u != w
                    && !next.contains(&u)
                    && !sub.iter().any(|&s| g.has_edge(s, u))
                {
                    next.push(u);
                }
            }
            sub.push(w);
            extend(g, k, root, sub, next, f);
            sub.pop();
        }
    }
    if k == 0 {
        return;
    }
    for v in 0..g.node_count() {
        let ext: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| u > v).collect();
        let mut sub = vec![v];
        extend(g, k, v, &mut sub, ext, &mut f);
    }
}

/// Classify the induced subgraph on `nodes` (assumed connected).
pub fn classify_subset(g: &Graph, nodes: &[usize]) -> Graphlet {
    let mut edges = 0;
    let mut max_degree = 0;
    for &a in nodes {
        let d = nodes.iter().filter(|&&b| g.has_edge(a, b)).count();
        edges += d;
        max_degree = max_degree.max(d);
    }
    Graphlet::classify(nodes.len(), edges / 2, max_degree)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotifGraph {
    pub motif: Graphlet,
    pub min_count: u64,
    pub all_pairs: bool,
    /// Surviving weighted pairs `(u, v, W_H(u, v))` with `u < v`.
    pub edges: Vec<(usize, usize, u64)>,
    pub components: Partition,
}

impl MotifGraph {
    pub fn weight(&self, u: usize, v: usize) -> u64 {
        let key = (u.min(v), u.max(v));
        self.edges
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .map(|i| self.edges[i].2)
            .unwrap_or(0)
    }

    pub fn component_count(&self) -> usize {
        self.components.class_count()
    }

    /// Components with at least one surviving edge.
    pub fn nontrivial_components(&self) -> usize {
        let mut has_edge = vec![false; self.components.class_count()];
        for &(u, _, _) in &self.edges {
            has_edge[self.components.class_of(u)] = true;
        }
        has_edge.iter().filter(|&&b| b).count()
    }

    pub fn to_graph(&self, n: usize) -> Result<Graph> {
        let edges: Vec<(usize, usize, f64)> =
            self.edges.iter().map(|&(u, v, w)| (u, v, w as f64)).collect();
        Graph::from_weighted(n, &edges)
    }

    /// Weighted edge list `u v w`, one per line.
    pub fn write_edges<W: Write>(&self, mut w: W) -> Result<()> {
        for &(u, v, x) in &self.edges {
            writeln!(w, "{u} {v} {x}")?;
        }
        Ok(())
    }
}

/// Weighted motif graph of `motif`: the weight of a pair is the number of
/// induced instances of the motif containing both nodes. By default only pairs
/// that are edges of `g` are weighted; `all_pairs` also weights non-adjacent
/// pairs that co-occur in an instance. Pairs with weight below `min_count` are
/// dropped before the components are computed.
pub fn motif_graph(g: &Graph, motif: Graphlet, min_count: u64, all_pairs: bool) -> Result<MotifGraph> {
    if min_count < 1 {
        return Err(Error::invalid("motif threshold must be >= 1"));
    }
    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for_each_connected_subset(g, motif.node_count(), |sub| {
        if classify_subset(g, sub) != motif {
            return;
        }
        for (i, &a) in sub.iter().enumerate() {
            for &b in &sub[i + 1..] {
                if all_pairs || g.has_edge(a, b) {
                    *weights.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                }
            }
        }
    });
    let edges: Vec<(usize, usize, u64)> = weights
        .into_iter()
        .filter(|&(_, w)| w >= min_count)
        .map(|((u, v), w)| (u, v, w))
        .collect();
    let pairs: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    let survivor = Graph::from_unweighted(g.node_count(), &pairs)?;
    let components = crate::graph::connected_components(&survivor);
    Ok(MotifGraph {
        motif,
        min_count,
        all_pairs,
        edges,
        components,
    })
}
