//! Deciding whether an embedding preserves communities or roles.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::embedding::{
    embed_community, embed_diffusion, embed_factorized_roles, embed_implicit, embed_role,
    DiffusionEmbedConfig, EmbedConfig, Embedding, FactorizedRolesConfig, ImplicitConfig,
};
use crate::equivalence::{exact_role_partition, regular_equivalence_partition};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::generators::{
    borgatti_everett, gen_barbell, gen_block_chung_lu, gen_clique, gen_complete_bipartite,
    gen_disjoint_stars, ChungLuConfig,
};
use crate::graph::{bfs_distances, connected_components, Graph};
use crate::partition::Partition;
use crate::stats::{cosine, mean, spearman};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Minimum intra-minus-inter cosine contrast.
    pub tau: f64,
    /// Proximity correlation below which a role signal counts as role.
    pub rho: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { tau: 0.1, rho: 0.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Community,
    Role,
    Mixed,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Community => "community",
            Verdict::Role => "role",
            Verdict::Mixed => "mixed",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub community_score: f64,
    pub role_score: f64,
    pub proximity_correlation: f64,
    pub transfer_score: f64,
    pub transfer_pairs: usize,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

pub fn verdict_from_scores(cs: f64, rs: f64, pc: f64, th: Thresholds) -> Verdict {
    if cs > th.tau && rs > th.tau {
        Verdict::Mixed
    } else if cs > th.tau {
        Verdict::Community
    } else if rs > th.tau && pc < th.rho {
        Verdict::Role
    } else {
        Verdict::Inconclusive
    }
}

/// Pairwise cosine similarities after subtracting the mean row.
pub fn centered_cosine_matrix(e: &DMatrix<f64>) -> DMatrix<f64> {
    let mean_row = e.row_mean();
    let rows: Vec<Vec<f64>> = (0..e.nrows())
        .map(|i| (0..e.ncols()).map(|j| e[(i, j)] - mean_row[j]).collect())
        .collect();
    DMatrix::from_fn(e.nrows(), e.nrows(), |i, j| cosine(&rows[i], &rows[j]))
}

fn contrast(cos: &DMatrix<f64>, p: &Partition) -> f64 {
    let (mut intra, mut n_intra, mut inter, mut n_inter) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..cos.nrows() {
        for j in i + 1..cos.nrows() {
            if p.class_of(i) == p.class_of(j) {
                intra += cos[(i, j)];
                n_intra += 1;
            } else {
                inter += cos[(i, j)];
                n_inter += 1;
            }
        }
    }
    if n_intra == 0 || n_inter == 0 {
        return 0.0;
    }
    intra / n_intra as f64 - inter / n_inter as f64
}

/// Score an embedding against ground-truth communities and roles.
///
/// Scores use cosine similarity of mean-centered rows, so they are invariant
/// under rotations of the embedding space. Proximity is `1 / (1 + dist)`, or 0
/// for unreachable pairs. Transfer pairs are nodes in different components
/// with the same role and the same color-refinement class.
pub fn diagnose(
    g: &Graph,
    emb: &Embedding,
    communities: &Partition,
    roles: &Partition,
    th: Thresholds,
) -> Result<DiagnosticReport> {
    let n = g.node_count();
    if emb.n() != n || communities.len() != n || roles.len() != n {
        return Err(Error::invalid("embedding and partitions must cover every node"));
    }
    let mut notes = Vec::new();
    let degenerate = (1..n).all(|i| emb.data.row(i) == emb.data.row(0));
    if degenerate {
        notes.push("degenerate embedding: all rows are equal".to_string());
        return Ok(DiagnosticReport {
            community_score: 0.0,
            role_score: 0.0,
            proximity_correlation: 0.0,
            transfer_score: 0.0,
            transfer_pairs: 0,
            verdict: Verdict::Inconclusive,
            thresholds: th,
            notes,
        });
    }
    let cos = centered_cosine_matrix(&emb.data);
    let community_score = contrast(&cos, communities);
    let role_score = contrast(&cos, roles);

    let mut sims = Vec::new();
    let mut prox = Vec::new();
    for i in 0..n {
        let dist = bfs_distances(g, i);
        for (j, dj) in dist.iter().enumerate().skip(i + 1) {
            // Quantized so that rounding noise cannot reorder tied similarities.
            sims.push((cos[(i, j)] * 1e10).round());
            prox.push(dj.map_or(0.0, |d| 1.0 / (1.0 + d as f64)));
        }
    }
    let proximity_correlation = spearman(&sims, &prox);

    let comps = connected_components(g);
    let colors = exact_role_partition(g);
    let mut transfer = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if comps.class_of(i) != comps.class_of(j)
                && roles.class_of(i) == roles.class_of(j)
                && colors.class_of(i) == colors.class_of(j)
            {
                transfer.push(cos[(i, j)]);
            }
        }
    }
    if transfer.is_empty() {
        notes.push("no cross-component pairs with matching structure; transfer score is 0".into());
    }
    let transfer_score = mean(&transfer);
    let verdict = verdict_from_scores(community_score, role_score, proximity_correlation, th);
    Ok(DiagnosticReport {
        community_score,
        role_score,
        proximity_correlation,
        transfer_score,
        transfer_pairs: transfer.len(),
        verdict,
        thresholds: th,
        notes,
    })
}

/// A fixed graph with its ground-truth communities and roles.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub graph: Graph,
    pub communities: Partition,
    pub roles: Partition,
}

pub const SCENARIO_NAMES: [&str; 6] = [
    "barbell",
    "disjoint-stars",
    "borgatti-everett",
    "chung-lu",
    "clique",
    "bipartite",
];

/// The fixed scenario set. Role ground truth is the degree-seeded regular
/// partition, except for the Chung-Lu graph, which has no planted roles and
/// gets singleton role classes.
pub fn scenarios(seed: u64) -> Result<Vec<Scenario>> {
    let (barbell, cliques) = gen_barbell(5)?;
    let barbell_roles = regular_equivalence_partition(&barbell);
    let (stars, star_comps, star_roles) = gen_disjoint_stars(2, 4)?;
    let (be, be_roles, be_comms) = borgatti_everett();
    let cl = gen_block_chung_lu(&ChungLuConfig::new(vec![50, 50], 0.9, 1.7, seed))?;
    let cl_roles = Partition::discrete(cl.graph.node_count());
    let clique = gen_clique(6)?;
    let bip = gen_complete_bipartite(3, 4)?;
    let bip_roles = regular_equivalence_partition(&bip);
    Ok(vec![
        Scenario { name: "barbell", graph: barbell, communities: cliques, roles: barbell_roles },
        Scenario { name: "disjoint-stars", graph: stars, communities: star_comps, roles: star_roles },
        Scenario { name: "borgatti-everett", graph: be, communities: be_comms, roles: be_roles },
        Scenario { name: "chung-lu", graph: cl.graph, communities: cl.blocks, roles: cl_roles },
        Scenario { name: "clique", graph: clique, communities: Partition::single(6), roles: Partition::single(6) },
        Scenario { name: "bipartite", graph: bip, communities: Partition::single(7), roles: bip_roles },
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    Deepwalk,
    Role2vec,
    Implicit,
    RolesNmf,
    Diffusion,
}

impl Mechanism {
    pub const ALL: [Mechanism; 5] = [
        Mechanism::Deepwalk,
        Mechanism::Role2vec,
        Mechanism::Implicit,
        Mechanism::RolesNmf,
        Mechanism::Diffusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Deepwalk => "deepwalk",
            Mechanism::Role2vec => "role2vec",
            Mechanism::Implicit => "implicit",
            Mechanism::RolesNmf => "roles-nmf",
            Mechanism::Diffusion => "diffusion",
        }
    }
}

impl std::str::FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mechanism::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown mechanism `{s}`")))
    }
}

/// Run one mechanism with its default configuration.
pub fn run_mechanism(g: &Graph, mechanism: Mechanism, k_roles: usize, seed: u64) -> Result<Embedding> {
    match mechanism {
        Mechanism::Deepwalk => embed_community(g, &EmbedConfig { seed, ..Default::default() }),
        Mechanism::Role2vec => embed_role(g, &EmbedConfig { seed, ..Default::default() }),
        Mechanism::Implicit => embed_implicit(g, &ImplicitConfig::default()),
        Mechanism::RolesNmf => embed_factorized_roles(
            g,
            &FactorizedRolesConfig { k_roles: k_roles.max(1), seed, ..Default::default() },
        ),
        Mechanism::Diffusion => embed_diffusion(g, &DiffusionEmbedConfig { seed, ..Default::default() }),
    }
}

/// Verdicts the suite is expected to reproduce; other cells are report-only.
pub fn expected_verdict(scenario: &str, mechanism: Mechanism) -> Option<Verdict> {
    match (scenario, mechanism) {
        ("barbell" | "chung-lu", Mechanism::Deepwalk | Mechanism::Implicit) => Some(Verdict::Community),
        ("disjoint-stars" | "borgatti-everett", Mechanism::Role2vec | Mechanism::RolesNmf) => {
            Some(Verdict::Role)
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteCell {
    pub scenario: String,
    pub mechanism: Mechanism,
    pub report: DiagnosticReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
}

impl SuiteCell {
    /// True unless the cell has an expectation that the verdict misses.
    pub fn agrees(&self) -> bool {
        self.expected.is_none_or(|e| e == self.report.verdict)
    }
}

/// Cap on the NMF rank used by the suite.
const MAX_SUITE_ROLES: usize = 8;

fn mix(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)
}

/// Every mechanism on every scenario.
pub fn scenario_suite(seed: u64) -> Result<Vec<SuiteCell>> {
    scenario_suite_with(seed, Exec::default())
}

pub fn scenario_suite_with(seed: u64, exec: Exec) -> Result<Vec<SuiteCell>> {
    let scen = scenarios(seed)?;
    let m = Mechanism::ALL.len();
    let cells = exec.map(scen.len() * m, |idx| -> Result<SuiteCell> {
        let s = &scen[idx / m];
        let mech = Mechanism::ALL[idx % m];
        let k_roles = s.roles.class_count().min(MAX_SUITE_ROLES);
        let emb = run_mechanism(&s.graph, mech, k_roles, mix(seed, idx as u64))?;
        let report = diagnose(&s.graph, &emb, &s.communities, &s.roles, Thresholds::default())?;
        Ok(SuiteCell {
            scenario: s.name.to_string(),
            mechanism: mech,
            report,
            expected: expected_verdict(s.name, mech),
        })
    });
    cells.into_iter().collect()
}

/// Scenario × mechanism verdict table; expected cells are marked `ok` or
/// `MISS`.
pub fn verdict_table(cells: &[SuiteCell]) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<18}", "scenario");
    for m in Mechanism::ALL {
        let _ = write!(out, " {:<20}", m.name());
    }
    out.push('\n');
    for name in SCENARIO_NAMES {
        let _ = write!(out, "{name:<18}");
        for m in Mechanism::ALL {
            let cell = cells.iter().find(|c| c.scenario == name && c.mechanism == m);
            let text = match cell {
                Some(c) => {
                    let mark = match c.expected {
                        Some(_) if c.agrees() => " ok",
                        Some(_) => " MISS",
                        None => "",
                    };
                    format!("{}{mark}", c.report.verdict.name())
                }
                None => "-".into(),
            };
            let _ = write!(out, " {text:<20}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::Provenance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn verdict_rules() {
        let th = Thresholds::default();
        assert_eq!(verdict_from_scores(0.5, 0.0, 0.9, th), Verdict::Community);
        assert_eq!(verdict_from_scores(0.0, 0.5, 0.0, th), Verdict::Role);
        assert_eq!(verdict_from_scores(0.0, 0.5, 0.5, th), Verdict::Inconclusive);
        assert_eq!(verdict_from_scores(0.5, 0.5, 0.0, th), Verdict::Mixed);
        assert_eq!(verdict_from_scores(0.05, 0.05, 0.0, th), Verdict::Inconclusive);
    }

    #[test]
    fn degenerate_is_inconclusive() {
        let (g, comms, roles) = gen_disjoint_stars(2, 4).unwrap();
        let e = Embedding::new(DMatrix::from_element(10, 3, 0.5), Provenance::Diffusion, serde_json::json!({})).unwrap();
        let r = diagnose(&g, &e, &comms, &roles, Thresholds::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn random_embedding_inconclusive() {
        let s = scenarios(3).unwrap().into_iter().find(|s| s.name == "chung-lu").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let data = DMatrix::from_fn(s.graph.node_count(), 8, |_, _| rng.random::<f64>() - 0.5);
        let e = Embedding::new(data, Provenance::Diffusion, serde_json::json!({})).unwrap();
        let r = diagnose(&s.graph, &e, &s.communities, &s.roles, Thresholds::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive, "{r:?}");
    }

    #[test]
    fn fixture_cells() {
        assert_eq!(expected_verdict("barbell", Mechanism::Deepwalk), Some(Verdict::Community));
        assert_eq!(expected_verdict("borgatti-everett", Mechanism::RolesNmf), Some(Verdict::Role));
        assert_eq!(expected_verdict("clique", Mechanism::Deepwalk), None);
        let n = SCENARIO_NAMES
            .iter()
            .flat_map(|s| Mechanism::ALL.map(|m| expected_verdict(s, m)))
            .flatten()
            .count();
        assert_eq!(n, 8);
    }

    #[test]
    fn mechanism_names_round_trip() {
        for m in Mechanism::ALL {
            assert_eq!(m.name().parse::<Mechanism>().unwrap(), m);
        }
        assert!("node2vec".parse::<Mechanism>().is_err());
    }
}
