//! Structural-role mechanisms: recursive feature aggregation, feature-typed
//! walks and nonnegative factorization of feature matrices.

use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::Write;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffusion::{aggregate, Aggregator};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::Graph;
use crate::graphlets::count_orbits;
use crate::partition::Partition;
use crate::stats::pearson;
use crate::walks::WalkCorpus;

pub const MAX_RECURSION_DEPTH: usize = 4;

/// Degree and triangle count.
pub fn default_base_features(g: &Graph) -> FeatureMatrix {
    let counts = count_orbits(g);
    let n = g.node_count();
    let data = DMatrix::from_fn(n, 2, |i, j| counts.get(i, if j == 0 { 0 } else { 3 }) as f64);
    FeatureMatrix::new(data, vec!["degree".into(), "triangles".into()]).expect("finite")
}

fn is_constant(col: &[f64]) -> bool {
    col.windows(2).all(|w| w[0] == w[1])
}

fn duplicates(existing: &[Vec<f64>], col: &[f64]) -> bool {
    existing.iter().any(|e| {
        if is_constant(e) || is_constant(col) {
            is_constant(e) && is_constant(col)
        } else {
            pearson(e, col) >= 1.0 - 1e-12
        }
    })
}

/// Append neighbor aggregates of the previous level's columns, `depth` times.
/// New columns perfectly correlated with an existing one are dropped.
pub fn recursive_features(
    g: &Graph,
    base: &FeatureMatrix,
    depth: usize,
    aggregators: &[Aggregator],
) -> Result<FeatureMatrix> {
    if depth > MAX_RECURSION_DEPTH {
        return Err(Error::invalid(format!(
            "recursion depth {depth} exceeds {MAX_RECURSION_DEPTH}"
        )));
    }
    if base.nrows() != g.node_count() {
        return Err(Error::invalid("feature rows differ from node count"));
    }
    let mut cols: Vec<Vec<f64>> = (0..base.ncols()).map(|j| base.column(j)).collect();
    let mut labels: Vec<String> = base.labels().to_vec();
    let mut frontier: Vec<usize> = (0..cols.len()).collect();
    for _ in 0..depth {
        let mut added = Vec::new();
        for &j in &frontier {
            let x = DMatrix::from_column_slice(g.node_count(), 1, &cols[j]);
            for &agg in aggregators {
                let y: Vec<f64> = aggregate(g, &x, agg).iter().copied().collect();
                if duplicates(&cols, &y) {
                    continue;
                }
                labels.push(format!("{}({})", agg.name(), labels[j]));
                cols.push(y);
                added.push(cols.len() - 1);
            }
        }
        if added.is_empty() {
            break;
        }
        frontier = added;
    }
    let n = g.node_count();
    let data = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    FeatureMatrix::new(data, labels)
}

fn signed_log1p(x: f64) -> f64 {
    x.signum() * x.abs().ln_1p()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBins {
    pub label: String,
    /// Range of `sign(x)·ln(1 + |x|)` observed at fit time.
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl FeatureBins {
    pub fn bin(&self, x: f64) -> usize {
        if self.bins == 1 {
            return 0;
        }
        let t = (signed_log1p(x) - self.lo) / (self.hi - self.lo);
        ((t * self.bins as f64).floor().max(0.0) as usize).min(self.bins - 1)
    }

    /// Interior bin boundaries on the original scale.
    pub fn edges(&self) -> Vec<f64> {
        (1..self.bins)
            .map(|i| {
                let s = self.lo + (self.hi - self.lo) * i as f64 / self.bins as f64;
                s.signum() * s.abs().exp_m1()
            })
            .collect()
    }
}

/// Feature vector → type id by per-feature logarithmic binning. The type id is
/// the mixed-radix index of the tuple of bin indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeMapping {
    pub bins_per_feature: usize,
    pub features: Vec<FeatureBins>,
}

pub fn fit_type_mapping(x: &FeatureMatrix, bins_per_feature: usize) -> Result<TypeMapping> {
    if bins_per_feature == 0 {
        return Err(Error::invalid("bins_per_feature must be >= 1"));
    }
    let mut features = Vec::with_capacity(x.ncols());
    for j in 0..x.ncols() {
        let col = x.column(j);
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("column {} has non-finite values", j)));
        }
        let t: Vec<f64> = col.iter().map(|&v| signed_log1p(v)).collect();
        let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if t.is_empty() { (0.0, 0.0) } else { (lo, hi) };
        let bins = if hi > lo { bins_per_feature } else { 1 };
        features.push(FeatureBins {
            label: x.labels()[j].clone(),
            lo,
            hi,
            bins,
        });
    }
    Ok(TypeMapping {
        bins_per_feature,
        features,
    })
}

impl TypeMapping {
    pub fn type_of(&self, row: &[f64]) -> Result<u64> {
        if row.len() != self.features.len() {
            return Err(Error::invalid(format!(
                "feature vector has {} entries, mapping expects {}",
                row.len(),
                self.features.len()
            )));
        }
        let mut id: u64 = 0;
        for (f, &x) in self.features.iter().zip(row) {
            if !x.is_finite() {
                return Err(Error::invalid("non-finite feature value"));
            }
            id = id
                .checked_mul(f.bins as u64)
                .and_then(|v| v.checked_add(f.bin(x) as u64))
                .ok_or_else(|| Error::invalid("type id space overflows u64; use fewer bins"))?;
        }
        Ok(id)
    }

    pub fn types(&self, x: &FeatureMatrix) -> Result<Vec<u64>> {
        (0..x.nrows()).map(|i| self.type_of(&x.row(i))).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Dense relabeling of type ids to tokens `0..T` in increasing type order;
/// returns the per-node tokens and the token count.
pub fn dense_tokens(types: &[u64]) -> (Vec<usize>, usize) {
    let mut vocab = types.to_vec();
    vocab.sort_unstable();
    vocab.dedup();
    let tokens = types.iter().map(|t| vocab.binary_search(t).unwrap()).collect();
    (tokens, vocab.len())
}

/// Replace every node id of every walk by its node's type.
pub fn map_walks(corpus: &WalkCorpus, types: &[usize]) -> Result<WalkCorpus> {
    let walks = corpus
        .walks
        .iter()
        .map(|w| {
            w.iter()
                .map(|&u| {
                    types
                        .get(u)
                        .copied()
                        .ok_or_else(|| Error::invalid(format!("node {u} has no type")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WalkCorpus {
        walks,
        length: corpus.length,
        seed: corpus.seed,
        truncated: corpus.truncated,
    })
}

/// Feature-based walks: the node walks of `corpus` seen through `mapping`.
pub fn feature_walks(
    g: &Graph,
    corpus: &WalkCorpus,
    mapping: &TypeMapping,
    x: &FeatureMatrix,
) -> Result<WalkCorpus> {
    if x.nrows() != g.node_count() {
        return Err(Error::invalid(format!(
            "features cover {} nodes, graph has {}",
            x.nrows(),
            g.node_count()
        )));
    }
    let types: Vec<usize> = mapping.types(x)?.into_iter().map(|t| t as usize).collect();
    map_walks(corpus, &types)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoleFactorization {
    /// `n × k`, nonnegative.
    pub membership: DMatrix<f64>,
    /// `k × F`, nonnegative.
    pub roles: DMatrix<f64>,
    /// `‖X − M R‖_F` after the last iteration.
    pub error: f64,
    /// Objective after initialisation and after every iteration.
    pub history: Vec<f64>,
    pub iters_run: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmfMeta {
    pub k: usize,
    pub iters_run: usize,
    pub final_error: f64,
    pub seed: u64,
}

impl RoleFactorization {
    pub fn k(&self) -> usize {
        self.membership.ncols()
    }

    pub fn meta(&self) -> NmfMeta {
        NmfMeta {
            k: self.k(),
            iters_run: self.iters_run,
            final_error: self.error,
            seed: self.seed,
        }
    }

    /// True when no iteration increased the objective by more than `slack`
    /// (relative to the objective, floored at 1).
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.history
            .windows(2)
            .all(|w| w[1] <= w[0] + slack * w[0].max(1.0))
    }

    pub fn write_membership_csv<W: Write>(&self, w: W) -> Result<()> {
        let labels = (0..self.k()).map(|j| format!("role_{j}")).collect();
        FeatureMatrix::new(self.membership.clone(), labels)?.write_csv(w)
    }

    pub fn write_roles_csv<W: Write>(&self, w: W, feature_labels: &[String]) -> Result<()> {
        FeatureMatrix::new(self.roles.clone(), feature_labels.to_vec())?.write_csv(w)
    }
}

const NMF_EPS: f64 = 1e-12;

/// Nonnegative factorization `X ≈ M R` by multiplicative updates. Stops after
/// `iters` iterations or once the relative improvement falls below `tol`.
pub fn nmf(x: &FeatureMatrix, k: usize, iters: usize, tol: f64, seed: u64) -> Result<RoleFactorization> {
    nmf_matrix(x.data(), k, iters, tol, seed)
}

pub fn nmf_matrix(
    x: &DMatrix<f64>,
    k: usize,
    iters: usize,
    tol: f64,
    seed: u64,
) -> Result<RoleFactorization> {
    let (n, f) = x.shape();
    if let Some(v) = x.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::invalid(format!(
            "NMF needs finite nonnegative input, found {v}; apply a log1p transform to counts \
             or shift features to be nonnegative"
        )));
    }
    if k == 0 || k > n.min(f) {
        return Err(Error::invalid(format!("k = {k} outside 1..={}", n.min(f))));
    }
    let scale = (x.mean() / k as f64).sqrt().max(1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = DMatrix::from_fn(k, f, |_, _| rng.random::<f64>() * scale);
    // Membership rows are initialised from a stream keyed by the row content,
    // so equal rows of X stay equal through every update.
    let mut w = DMatrix::zeros(n, k);
    for i in 0..n {
        let mut hasher = DefaultHasher::new();
        for v in x.row(i).iter() {
            (v + 0.0).to_bits().hash(&mut hasher);
        }
        let mut row_rng = ChaCha8Rng::seed_from_u64(seed);
        row_rng.set_stream(hasher.finish());
        for j in 0..k {
            w[(i, j)] = row_rng.random::<f64>() * scale;
        }
    }
    let objective = |w: &DMatrix<f64>, h: &DMatrix<f64>| (x - w * h).norm();

    let mut err = objective(&w, &h);
    let mut history = vec![err];
    let mut iters_run = 0;
    for _ in 0..iters {
        let wt = w.transpose();
        let num = &wt * x;
        let den = &wt * &w * &h;
        h.zip_zip_apply(&num, &den, |hv, a, b| *hv *= a / (b + NMF_EPS));

        let ht = h.transpose();
        let num = x * &ht;
        let den = &w * (&h * &ht);
        w.zip_zip_apply(&num, &den, |wv, a, b| *wv *= a / (b + NMF_EPS));

        iters_run += 1;
        let next = objective(&w, &h);
        history.push(next);
        let improvement = if err > 0.0 { (err - next) / err } else { 0.0 };
        err = next;
        if improvement < tol {
            break;
        }
    }
    Ok(RoleFactorization {
        membership: w,
        roles: h,
        error: err,
        history,
        iters_run,
        seed,
    })
}

/// Hard role per node by row argmax; ties go to the lower role index and
/// all-zero rows to role 0.
pub fn assign_roles(m: &DMatrix<f64>) -> Vec<usize> {
    (0..m.nrows())
        .map(|i| {
            let row = m.row(i);
            if row.iter().all(|&v| v == 0.0) {
                log::warn!("node {i} has an all-zero membership row; assigned role 0");
                return 0;
            }
            let mut best = 0;
            for j in 1..row.len() {
                if row[j] > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// [`assign_roles`] as a partition (roles renumbered by first appearance).
pub fn role_partition(m: &DMatrix<f64>) -> Partition {
    Partition::from_keys(assign_roles(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_barbell, gen_disjoint_stars, gen_star};
    use crate::graphlets::{orbit_feature_matrix, Transform};

    fn degree_column(g: &Graph) -> FeatureMatrix {
        let d: Vec<f64> = (0..g.node_count()).map(|u| g.degree(u) as f64).collect();
        FeatureMatrix::column_vector(&d, "degree").unwrap()
    }

    #[test]
    fn star_mean_recursion() {
        let g = gen_star(4).unwrap();
        let f = recursive_features(&g, &degree_column(&g), 1, &[Aggregator::Mean]).unwrap();
        assert_eq!(f.row(0), vec![4.0, 1.0]);
        assert_eq!(f.row(3), vec![1.0, 4.0]);
        assert_eq!(f.labels(), ["degree", "mean(degree)"]);
    }

    #[test]
    fn depth_zero_and_guard() {
        let g = gen_star(4).unwrap();
        let base = degree_column(&g);
        assert_eq!(recursive_features(&g, &base, 0, &[Aggregator::Mean]).unwrap(), base);
        assert!(recursive_features(&g, &base, 5, &[Aggregator::Mean]).is_err());
    }

    #[test]
    fn duplicate_columns_pruned() {
        // On a regular graph every aggregate of degree is proportional to it.
        let g = crate::generators::gen_cycle(6).unwrap();
        let f = recursive_features(&g, &degree_column(&g), 3, &[Aggregator::Mean, Aggregator::Sum])
            .unwrap();
        assert_eq!(f.ncols(), 1);
    }

    #[test]
    fn disjoint_hubs_match() {
        let (g, _, _) = gen_disjoint_stars(2, 4).unwrap();
        let base = default_base_features(&g);
        let f = recursive_features(&g, &base, 2, &[Aggregator::Mean, Aggregator::Sum]).unwrap();
        assert_eq!(f.row(0), f.row(5));
    }

    #[test]
    fn type_mapping_stars() {
        let (g, _, _) = gen_disjoint_stars(2, 4).unwrap();
        let x = orbit_feature_matrix(&g, Transform::None);
        let m = fit_type_mapping(&x, 4).unwrap();
        let t = m.types(&x).unwrap();
        assert_eq!(t[0], t[5]);
        assert_ne!(t[0], t[1]);
        assert!(m.features.iter().filter(|f| f.bins == 1).count() > 0);
    }

    #[test]
    fn constant_column_single_bin() {
        let x = FeatureMatrix::unlabeled(DMatrix::from_row_slice(3, 2, &[1.0, 7.0, 2.0, 7.0, 3.0, 7.0]))
            .unwrap();
        let m = fit_type_mapping(&x, 3).unwrap();
        assert_eq!(m.features[1].bins, 1);
        let t = m.types(&x).unwrap();
        assert_eq!(t, vec![0, 1, 2]);
        assert_eq!(m.type_of(&[100.0, 7.0]).unwrap(), 2);
        assert_eq!(m.type_of(&[-5.0, 7.0]).unwrap(), 0);
        assert!(fit_type_mapping(&x, 0).is_err());
    }

    #[test]
    fn barbell_types() {
        let (g, _) = gen_barbell(5).unwrap();
        let x = orbit_feature_matrix(&g, Transform::None);
        let t = fit_type_mapping(&x, 4).unwrap().types(&x).unwrap();
        assert_eq!(t[4], t[5]);
        assert_ne!(t[0], t[4]);
        assert!([0, 1, 2, 3, 6, 7, 8, 9].iter().all(|&u| t[u] == t[0]));
    }

    #[test]
    fn overflow_detected() {
        let n = 70;
        let data = DMatrix::from_fn(2, n, |i, _| i as f64);
        let x = FeatureMatrix::unlabeled(data).unwrap();
        let m = fit_type_mapping(&x, 2).unwrap();
        assert!(m.type_of(&vec![1.0; n]).is_err());
    }

    #[test]
    fn feature_walk_substitution() {
        let g = gen_star(4).unwrap();
        let x = orbit_feature_matrix(&g, Transform::None);
        let m = fit_type_mapping(&x, 4).unwrap();
        let types = m.types(&x).unwrap();
        let corpus = WalkCorpus::from_walks(vec![vec![0, 1, 0, 2]]);
        let mapped = feature_walks(&g, &corpus, &m, &x).unwrap();
        let (th, tl) = (types[0] as usize, types[1] as usize);
        assert_eq!(mapped.walks[0], vec![th, tl, th, tl]);
        let short = FeatureMatrix::column_vector(&[1.0], "x").unwrap();
        assert!(feature_walks(&g, &corpus, &m, &short).is_err());
    }

    #[test]
    fn nmf_rank_one() {
        let a = [1.0, 2.0, 3.0, 0.5];
        let b = [2.0, 0.0, 1.0];
        let x = DMatrix::from_fn(4, 3, |i, j| a[i] * b[j]);
        let r = nmf_matrix(&x, 1, 2000, 0.0, 1).unwrap();
        assert!(r.error < 1e-6 * x.norm(), "{}", r.error);
        assert!(r.is_monotone(1e-12));
    }

    #[test]
    fn nmf_rejects_negative_and_bad_k() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 0.0, 1.0]);
        let err = nmf_matrix(&x, 1, 10, 0.0, 0).unwrap_err();
        assert!(err.to_string().contains("log1p"));
        let ok = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(nmf_matrix(&ok, 3, 10, 0.0, 0).is_err());
        assert!(nmf_matrix(&ok, 0, 10, 0.0, 0).is_err());
    }

    #[test]
    fn nmf_two_patterns() {
        let p = [[5.0, 0.0, 1.0, 0.0], [0.0, 4.0, 0.0, 3.0]];
        let x = DMatrix::from_fn(8, 4, |i, j| p[i % 2][j]);
        let r = nmf_matrix(&x, 2, 500, 0.0, 3).unwrap();
        let roles = assign_roles(&r.membership);
        for i in 0..8 {
            assert_eq!(roles[i] == roles[0], i % 2 == 0);
        }
    }

    #[test]
    fn argmax_rule() {
        let m = DMatrix::from_row_slice(3, 2, &[0.1, 0.9, 0.5, 0.5, 0.0, 0.0]);
        assert_eq!(assign_roles(&m), vec![1, 0, 0]);
    }
}
