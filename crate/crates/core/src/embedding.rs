//! Corpus → co-occurrence → PPMI → truncated eigendecomposition, shared by the
//! proximity and role mechanisms, plus implicit walk-matrix and factorized-role
//! embeddings.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffusion::{diffuse, Aggregator, DiffusionConfig, OperatorKind};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::features::FeatureMatrix;
use crate::graph::Graph;
use crate::graphlets::count_orbits;
use crate::roles::{
    assign_roles, dense_tokens, fit_type_mapping, map_walks, nmf, recursive_features,
};
use crate::walks::{
    sample_walks_ranked, sample_walks_with, walk_count_matrix, walk_sum_matrix, WalkConfig,
    WalkCorpus, WalksPerNode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "deepwalk-style")]
    DeepWalk,
    #[serde(rename = "role2vec-style")]
    Role2Vec,
    #[serde(rename = "implicit-Ak")]
    Implicit,
    #[serde(rename = "diffusion")]
    Diffusion,
    #[serde(rename = "factorized-roles")]
    FactorizedRoles,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::DeepWalk => "deepwalk-style",
            Provenance::Role2Vec => "role2vec-style",
            Provenance::Implicit => "implicit-Ak",
            Provenance::Diffusion => "diffusion",
            Provenance::FactorizedRoles => "factorized-roles",
        }
    }
}

/// Node × d embedding with the mechanism that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub data: DMatrix<f64>,
    pub provenance: Provenance,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingMeta {
    pub provenance: Provenance,
    pub n: usize,
    pub d: usize,
    pub config: serde_json::Value,
}

impl Embedding {
    pub fn new(data: DMatrix<f64>, provenance: Provenance, config: serde_json::Value) -> Result<Self> {
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("embedding has non-finite entries"));
        }
        Ok(Embedding {
            data,
            provenance,
            config,
        })
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.data.row(i).iter().copied().collect()
    }

    pub fn cosine(&self, i: usize, j: usize) -> f64 {
        crate::stats::cosine(&self.row(i), &self.row(j))
    }

    pub fn meta(&self) -> EmbeddingMeta {
        EmbeddingMeta {
            provenance: self.provenance,
            n: self.n(),
            d: self.dim(),
            config: self.config.clone(),
        }
    }

    /// TSV with header `node_id dim_0 … dim_{d−1}`; `labels` replace the
    /// numeric node ids when given.
    pub fn write_tsv<W: Write>(&self, mut w: W, labels: Option<&[String]>) -> Result<()> {
        let header: Vec<String> = std::iter::once("node_id".to_string())
            .chain((0..self.dim()).map(|j| format!("dim_{j}")))
            .collect();
        writeln!(w, "{}", header.join("\t"))?;
        for i in 0..self.n() {
            let id = labels.map_or_else(|| i.to_string(), |l| l[i].clone());
            let vals: Vec<String> = self.data.row(i).iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{id}\t{}", vals.join("\t"))?;
        }
        Ok(())
    }

    pub fn write_meta_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.meta())?;
        Ok(())
    }
}

/// Symmetric within-window co-occurrence counts over tokens `0..vocab`;
/// pairs of equal tokens are skipped.
pub fn cooccurrence(corpus: &WalkCorpus, window: usize, vocab: usize) -> Result<DMatrix<f64>> {
    if window == 0 {
        return Err(Error::invalid("window must be >= 1"));
    }
    if corpus.is_empty() || corpus.walks.iter().all(|w| w.len() < 2) {
        return Err(Error::invalid("corpus has no token pairs"));
    }
    let mut m = DMatrix::zeros(vocab, vocab);
    for walk in &corpus.walks {
        for (i, &a) in walk.iter().enumerate() {
            if a >= vocab {
                return Err(Error::invalid(format!("token {a} outside vocabulary of {vocab}")));
            }
            for &b in walk.iter().skip(i + 1).take(window) {
                if a != b {
                    m[(a, b)] += 1.0;
                    m[(b, a)] += 1.0;
                }
            }
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmiOptions {
    /// Exponent applied to context counts.
    pub smoothing: f64,
    /// PMI values are shifted by `ln(shift)` before clipping at zero.
    pub shift: f64,
}

impl Default for PmiOptions {
    fn default() -> Self {
        PmiOptions {
            smoothing: 0.75,
            shift: 1.0,
        }
    }
}

/// Shifted positive PMI of a symmetric count matrix, symmetrized.
pub fn ppmi(counts: &DMatrix<f64>, opts: PmiOptions) -> Result<DMatrix<f64>> {
    if !counts.is_square() {
        return Err(Error::invalid("count matrix must be square"));
    }
    if !(opts.shift > 0.0) {
        return Err(Error::invalid("PMI shift must be > 0"));
    }
    let t = counts.nrows();
    let total = counts.sum();
    let rows: Vec<f64> = (0..t).map(|i| counts.row(i).sum()).collect();
    let ctx: Vec<f64> = (0..t).map(|j| counts.column(j).sum().powf(opts.smoothing)).collect();
    let ctx_total: f64 = ctx.iter().sum();
    let log_shift = opts.shift.ln();
    let mut p = DMatrix::zeros(t, t);
    if total == 0.0 {
        return Ok(p);
    }
    for i in 0..t {
        for j in 0..t {
            let c = counts[(i, j)];
            if c <= 0.0 {
                continue;
            }
            let pmi = ((c / total) / ((rows[i] / total) * (ctx[j] / ctx_total))).ln();
            p[(i, j)] = (pmi - log_shift).max(0.0);
        }
    }
    Ok((&p + p.transpose()) * 0.5)
}

/// Eigenpairs of a symmetric matrix ordered by decreasing `|λ|` (ties by
/// decreasing `λ`, then index), each vector signed so that its
/// largest-magnitude entry is positive. Eigenvalues below `1e-12` of the
/// largest magnitude are set to exactly zero.
const RANK_TOL: f64 = 1e-12;

fn sorted_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        lb.abs().total_cmp(&la.abs()).then(lb.total_cmp(&la)).then(a.cmp(&b))
    });
    let n = m.nrows();
    let mut vecs = DMatrix::zeros(n, order.len());
    let mut vals = Vec::with_capacity(order.len());
    for (c, &k) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).clone_owned();
        let mut best = 0;
        for i in 1..n {
            if v[i].abs() > v[best].abs() + 1e-12 {
                best = i;
            }
        }
        if n > 0 && v[best] < 0.0 {
            v = -v;
        }
        vecs.set_column(c, &v);
        vals.push(eig.eigenvalues[k]);
    }
    let floor = vals.first().map_or(0.0, |l| l.abs() * RANK_TOL);
    for l in &mut vals {
        if l.abs() <= floor {
            *l = 0.0;
        }
    }
    (vals, vecs)
}

/// Rank-`d` spectral factor `U_d |Λ_d|^{1/2}` of a symmetric matrix.
pub fn spectral_factor(m: &DMatrix<f64>, d: usize) -> Result<DMatrix<f64>> {
    if d == 0 || d > m.nrows() {
        return Err(Error::invalid(format!(
            "dimension {d} outside 1..={}",
            m.nrows()
        )));
    }
    let (vals, vecs) = sorted_eigen(m);
    let mut out = DMatrix::zeros(m.nrows(), d);
    for (c, v) in vals.iter().take(d).enumerate() {
        out.set_column(c, &(vecs.column(c) * v.abs().sqrt()));
    }
    Ok(out)
}

/// Frobenius error of the best rank-`d` eigen-approximation `Σ λ u uᵀ`.
pub fn spectral_reconstruction_error(m: &DMatrix<f64>, d: usize) -> Result<f64> {
    if d > m.nrows() {
        return Err(Error::invalid("dimension exceeds matrix size"));
    }
    let (vals, vecs) = sorted_eigen(m);
    let mut approx = DMatrix::zeros(m.nrows(), m.ncols());
    for (c, v) in vals.iter().take(d).enumerate() {
        let u = vecs.column(c);
        approx += u * u.transpose() * *v;
    }
    Ok((m - approx).norm())
}

/// Token embeddings from co-occurrence counts: PPMI then rank-`d` spectral
/// factorization.
pub fn factorize_pmi(counts: &DMatrix<f64>, d: usize, opts: PmiOptions) -> Result<DMatrix<f64>> {
    if d > counts.nrows() {
        return Err(Error::invalid(format!(
            "dimension {d} exceeds the {} tokens",
            counts.nrows()
        )));
    }
    spectral_factor(&ppmi(counts, opts)?, d)
}

fn factor_padded(m: &DMatrix<f64>, d: usize) -> Result<DMatrix<f64>> {
    let used = d.min(m.nrows());
    let mut out = DMatrix::zeros(m.nrows(), d);
    if used > 0 {
        out.columns_mut(0, used).copy_from(&spectral_factor(m, used)?);
    }
    if used < d {
        log::info!("only {used} of {d} dimensions carry signal; the rest are zero");
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedConfig {
    /// Nodes per walk.
    pub walk_length: usize,
    pub walks_per_node: usize,
    pub window: usize,
    pub dim: usize,
    pub pmi: PmiOptions,
    /// Bins per orbit feature for the role type mapping.
    pub bins: usize,
    pub seed: u64,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            walk_length: 10,
            walks_per_node: 10,
            window: 3,
            dim: 8,
            pmi: PmiOptions::default(),
            bins: 4,
            seed: 0,
        }
    }
}

impl EmbedConfig {
    fn walk_config(&self) -> WalkConfig {
        WalkConfig {
            length: self.walk_length,
            walks_per_node: WalksPerNode::Fixed(self.walks_per_node),
            seed: self.seed,
        }
    }
}

fn config_json<T: Serialize>(cfg: &T) -> serde_json::Value {
    serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null)
}

/// Walks over node ids → PPMI factorization.
pub fn embed_community(g: &Graph, cfg: &EmbedConfig) -> Result<Embedding> {
    embed_community_with(g, cfg, Exec::default())
}

pub fn embed_community_with(g: &Graph, cfg: &EmbedConfig, exec: Exec) -> Result<Embedding> {
    let corpus = sample_walks_with(g, &cfg.walk_config(), exec)?;
    let counts = cooccurrence(&corpus, cfg.window, g.node_count())?;
    let data = factor_padded(&ppmi(&counts, cfg.pmi)?, cfg.dim)?;
    Embedding::new(data, Provenance::DeepWalk, config_json(cfg))
}

/// Structure-only node ranking: lexicographic order of orbit rows, ties by
/// node id.
pub fn structural_rank(g: &Graph) -> Vec<usize> {
    let counts = count_orbits(g);
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| counts.row(a).cmp(counts.row(b)).then(a.cmp(&b)));
    let mut rank = vec![0; order.len()];
    for (r, &u) in order.iter().enumerate() {
        rank[u] = r;
    }
    rank
}

/// Walks over orbit-feature types → PPMI factorization over type tokens; each
/// node takes its type's vector.
pub fn embed_role(g: &Graph, cfg: &EmbedConfig) -> Result<Embedding> {
    embed_role_with(g, cfg, Exec::default())
}

pub fn embed_role_with(g: &Graph, cfg: &EmbedConfig, exec: Exec) -> Result<Embedding> {
    let x = count_orbits(g).to_features();
    let mapping = fit_type_mapping(&x, cfg.bins)?;
    let (tokens, vocab) = dense_tokens(&mapping.types(&x)?);
    let corpus = sample_walks_ranked(g, &cfg.walk_config(), &structural_rank(g), exec)?;
    let typed = map_walks(&corpus, &tokens)?;
    let counts = cooccurrence(&typed, cfg.window, vocab)?;
    let per_type = factor_padded(&ppmi(&counts, cfg.pmi)?, cfg.dim)?;
    let data = DMatrix::from_fn(g.node_count(), cfg.dim, |i, j| per_type[(tokens[i], j)]);
    let mut meta = config_json(cfg);
    meta["types"] = serde_json::json!(vocab);
    Embedding::new(data, Provenance::Role2Vec, meta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImplicitMode {
    /// Factorize each `A^i`, `i = 1..k`, and concatenate.
    PerPower,
    /// Factorize `A + A^2 + … + A^k`.
    Summed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImplicitConfig {
    pub k: usize,
    pub dim: usize,
    pub mode: ImplicitMode,
}

impl Default for ImplicitConfig {
    fn default() -> Self {
        ImplicitConfig {
            k: 3,
            dim: 8,
            mode: ImplicitMode::Summed,
        }
    }
}

/// Spectral factorization of walk-count matrices.
pub fn embed_implicit(g: &Graph, cfg: &ImplicitConfig) -> Result<Embedding> {
    if cfg.k == 0 {
        return Err(Error::invalid("k must be >= 1"));
    }
    let data = match cfg.mode {
        ImplicitMode::Summed => factor_padded(&walk_sum_matrix(g, cfg.k)?, cfg.dim)?,
        ImplicitMode::PerPower => {
            let mut out = DMatrix::zeros(g.node_count(), cfg.dim * cfg.k);
            for i in 1..=cfg.k {
                let f = factor_padded(&walk_count_matrix(g, i)?, cfg.dim)?;
                out.columns_mut((i - 1) * cfg.dim, cfg.dim).copy_from(&f);
            }
            out
        }
    };
    Embedding::new(data, Provenance::Implicit, config_json(cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizedRolesConfig {
    pub k_roles: usize,
    pub depth: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for FactorizedRolesConfig {
    fn default() -> Self {
        FactorizedRolesConfig {
            k_roles: 2,
            depth: 2,
            iters: 500,
            tol: 1e-9,
            seed: 0,
        }
    }
}

/// Recursive orbit features → log1p → NMF; the membership matrix is the
/// embedding.
pub fn embed_factorized_roles(g: &Graph, cfg: &FactorizedRolesConfig) -> Result<Embedding> {
    let base = count_orbits(g).to_features();
    let feats = recursive_features(g, &base, cfg.depth, &[Aggregator::Mean, Aggregator::Sum])?
        .log1p()?;
    let k = cfg.k_roles.min(feats.nrows()).min(feats.ncols());
    let fact = nmf(&feats, k, cfg.iters, cfg.tol, cfg.seed)?;
    let mut data = DMatrix::zeros(g.node_count(), cfg.k_roles);
    data.columns_mut(0, k).copy_from(&fact.membership);
    let mut meta = config_json(cfg);
    meta["final_error"] = serde_json::json!(fact.error);
    meta["roles"] = serde_json::json!(assign_roles(&fact.membership));
    Embedding::new(data, Provenance::FactorizedRoles, meta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionEmbedConfig {
    pub dim: usize,
    pub steps: usize,
    pub seed: u64,
}

impl Default for DiffusionEmbedConfig {
    fn default() -> Self {
        DiffusionEmbedConfig {
            dim: 8,
            steps: 3,
            seed: 0,
        }
    }
}

/// Seeded uniform random features smoothed by the symmetric walk operator.
pub fn embed_diffusion(g: &Graph, cfg: &DiffusionEmbedConfig) -> Result<Embedding> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x = DMatrix::from_fn(g.node_count(), cfg.dim, |_, _| rng.random::<f64>());
    let x = FeatureMatrix::unlabeled(x)?;
    let out = diffuse(g, &x, &DiffusionConfig::new(OperatorKind::Symmetric, cfg.steps))?;
    Embedding::new(out.into_data(), Provenance::Diffusion, config_json(cfg))
}
