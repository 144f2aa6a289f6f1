//! Feature propagation operators and numerical checks of their limits.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::{connected_components, is_bipartite, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    /// `D⁻¹A`
    RandomWalk,
    /// `D^{-1/2} A D^{-1/2}`
    Symmetric,
    /// `(1−θ) L X̃ + θ X` with `L = I − D^{-1/2} A D^{-1/2}`.
    ThetaLaplacian,
    /// `σ(S X̃ W_t)` with fixed random `W_t`.
    GcnStep,
    Aggregator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianForm {
    /// `L` as in the normalized Laplacian.
    Laplacian,
    /// `I − L`, i.e. the symmetric walk operator.
    IMinusL,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregator {
    Sum,
    Mean,
    Min,
    Max,
}

impl Aggregator {
    pub fn name(self) -> &'static str {
        match self {
            Aggregator::Sum => "sum",
            Aggregator::Mean => "mean",
            Aggregator::Min => "min",
            Aggregator::Max => "max",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Activation {
    Relu,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionConfig {
    pub operator: OperatorKind,
    pub theta: f64,
    pub steps: usize,
    pub aggregator: Aggregator,
    pub laplacian: LaplacianForm,
    pub activation: Activation,
    /// Use identity weight matrices in `GcnStep` instead of random ones.
    pub identity_weights: bool,
    pub seed: u64,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        DiffusionConfig {
            operator: OperatorKind::RandomWalk,
            theta: 0.0,
            steps: 1,
            aggregator: Aggregator::Mean,
            laplacian: LaplacianForm::Laplacian,
            activation: Activation::Relu,
            identity_weights: false,
            seed: 0,
        }
    }
}

impl DiffusionConfig {
    pub fn new(operator: OperatorKind, steps: usize) -> Self {
        DiffusionConfig {
            operator,
            steps,
            ..Default::default()
        }
    }
}

fn check_rows(g: &Graph, x: &DMatrix<f64>) -> Result<()> {
    if x.nrows() != g.node_count() {
        return Err(Error::invalid(format!(
            "feature matrix has {} rows, graph has {} nodes",
            x.nrows(),
            g.node_count()
        )));
    }
    Ok(())
}

fn require_no_isolated(g: &Graph) -> Result<()> {
    match g.isolated_nodes().first() {
        Some(&u) => Err(Error::Precondition(format!(
            "node {u} ({}) is isolated; D⁻¹A is undefined there",
            g.label(u)
        ))),
        None => Ok(()),
    }
}

/// One application of `D⁻¹A`.
pub fn random_walk_step(g: &Graph, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for u in 0..g.node_count() {
        let d = g.weighted_degree(u);
        if d == 0.0 {
            continue;
        }
        for (v, w) in g.weighted_neighbors(u) {
            for c in 0..x.ncols() {
                out[(u, c)] += w / d * x[(v, c)];
            }
        }
    }
    out
}

/// One application of `D^{-1/2} A D^{-1/2}`; isolated nodes get zero rows.
pub fn symmetric_step(g: &Graph, x: &DMatrix<f64>) -> DMatrix<f64> {
    let inv_sqrt: Vec<f64> = (0..g.node_count())
        .map(|u| {
            let d = g.weighted_degree(u);
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for u in 0..g.node_count() {
        for (v, w) in g.weighted_neighbors(u) {
            let s = w * inv_sqrt[u] * inv_sqrt[v];
            for c in 0..x.ncols() {
                out[(u, c)] += s * x[(v, c)];
            }
        }
    }
    out
}

/// Neighborhood aggregation; isolated nodes aggregate to zero.
pub fn aggregate(g: &Graph, x: &DMatrix<f64>, agg: Aggregator) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for u in 0..g.node_count() {
        let nb = g.neighbors(u);
        if nb.is_empty() {
            continue;
        }
        for c in 0..x.ncols() {
            let vals = nb.iter().map(|&v| x[(v, c)]);
            out[(u, c)] = match agg {
                Aggregator::Sum => vals.sum(),
                Aggregator::Mean => vals.sum::<f64>() / nb.len() as f64,
                Aggregator::Min => vals.fold(f64::INFINITY, f64::min),
                Aggregator::Max => vals.fold(f64::NEG_INFINITY, f64::max),
            };
        }
    }
    out
}

fn gcn_weights(f: usize, step: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step as u64);
    let s = 1.0 / (f as f64).sqrt();
    DMatrix::from_fn(f, f, |_, _| rng.random_range(-s..=s))
}

/// Apply `cfg.steps` rounds of the configured operator to `x`.
pub fn diffuse(g: &Graph, x: &FeatureMatrix, cfg: &DiffusionConfig) -> Result<FeatureMatrix> {
    let x0 = x.data();
    check_rows(g, x0)?;
    if !(0.0..=1.0).contains(&cfg.theta) {
        return Err(Error::invalid(format!("theta {} outside [0, 1]", cfg.theta)));
    }
    if cfg.operator == OperatorKind::RandomWalk {
        require_no_isolated(g)?;
    }
    let mut cur = x0.clone();
    for t in 0..cfg.steps {
        cur = match cfg.operator {
            OperatorKind::RandomWalk => random_walk_step(g, &cur),
            OperatorKind::Symmetric => symmetric_step(g, &cur),
            OperatorKind::ThetaLaplacian => {
                let s = symmetric_step(g, &cur);
                let l = match cfg.laplacian {
                    LaplacianForm::Laplacian => &cur - s,
                    LaplacianForm::IMinusL => s,
                };
                l * (1.0 - cfg.theta) + x0 * cfg.theta
            }
            OperatorKind::GcnStep => {
                let s = symmetric_step(g, &cur);
                let h = if cfg.identity_weights {
                    s
                } else {
                    s * gcn_weights(cur.ncols(), t, cfg.seed)
                };
                match cfg.activation {
                    Activation::Relu => h.map(|v| v.max(0.0)),
                    Activation::Linear => h,
                }
            }
            OperatorKind::Aggregator => aggregate(g, &cur, cfg.aggregator),
        };
    }
    FeatureMatrix::new(cur, x.labels().to_vec())
}

/// Original features next to exactly one round of neighbor aggregation.
pub fn motif_feature_one_step(
    g: &Graph,
    features: &FeatureMatrix,
    agg: Aggregator,
) -> Result<FeatureMatrix> {
    check_rows(g, features.data())?;
    let labels = features
        .labels()
        .iter()
        .map(|l| format!("{}({l})", agg.name()))
        .collect();
    let step = FeatureMatrix::new(aggregate(g, features.data(), agg), labels)?;
    features.hstack(&step)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub operator: String,
    pub t_reached: usize,
    pub converged: bool,
    /// Largest per-column spread (max − min) of the normalized rows.
    pub max_deviation: f64,
    /// Normalized limit row measured at `t_reached` (row 0).
    pub limit: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Largest absolute difference between measured and predicted limits.
    pub analytic_error: f64,
    pub analytic_match: bool,
}

fn require_theorem_preconditions(g: &Graph) -> Result<()> {
    if g.node_count() == 0 {
        return Err(Error::Precondition("empty graph".into()));
    }
    require_no_isolated(g)?;
    if connected_components(g).class_count() != 1 {
        return Err(Error::Precondition(
            "graph must be connected and non-bipartite; it is disconnected".into(),
        ));
    }
    if is_bipartite(g) {
        return Err(Error::Precondition(
            "graph must be connected and non-bipartite; it is bipartite".into(),
        ));
    }
    Ok(())
}

fn spread(x: &DMatrix<f64>, scale: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..x.ncols() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for r in 0..x.nrows() {
            let v = x[(r, c)] / scale[r];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        worst = worst.max(hi - lo);
    }
    worst
}

fn iterate_until_flat(
    g: &Graph,
    x: &DMatrix<f64>,
    t_max: usize,
    tol: f64,
    scale: &[f64],
    step: impl Fn(&Graph, &DMatrix<f64>) -> DMatrix<f64>,
) -> (DMatrix<f64>, usize, f64) {
    let mut cur = x.clone();
    let mut t = 0;
    let mut dev = spread(&cur, scale);
    while dev > tol && t < t_max {
        cur = step(g, &cur);
        t += 1;
        dev = spread(&cur, scale);
    }
    (cur, t, dev)
}

fn finish(
    operator: &str,
    cur: &DMatrix<f64>,
    t: usize,
    dev: f64,
    tol: f64,
    scale: &[f64],
    predicted: Vec<f64>,
) -> ConvergenceReport {
    let limit: Vec<f64> = (0..cur.ncols()).map(|c| cur[(0, c)] / scale[0]).collect();
    let mut analytic_error = 0.0f64;
    for r in 0..cur.nrows() {
        for (c, p) in predicted.iter().enumerate() {
            analytic_error = analytic_error.max((cur[(r, c)] / scale[r] - p).abs());
        }
    }
    ConvergenceReport {
        operator: operator.to_string(),
        t_reached: t,
        converged: dev <= tol,
        max_deviation: dev,
        limit,
        predicted,
        analytic_error,
        analytic_match: analytic_error <= tol,
    }
}

/// Iterate `D⁻¹A` until all rows agree within `tol`; the limit row is compared
/// against the degree-weighted mean `dᵀX / Σd`.
pub fn verify_convergence_rw(
    g: &Graph,
    x: &FeatureMatrix,
    t_max: usize,
    tol: f64,
) -> Result<ConvergenceReport> {
    check_rows(g, x.data())?;
    require_theorem_preconditions(g)?;
    let ones = vec![1.0; g.node_count()];
    let (cur, t, dev) = iterate_until_flat(g, x.data(), t_max, tol, &ones, random_walk_step);
    let d: Vec<f64> = (0..g.node_count()).map(|u| g.weighted_degree(u)).collect();
    let total: f64 = d.iter().sum();
    let predicted = (0..x.ncols())
        .map(|c| (0..x.nrows()).map(|r| d[r] * x.get(r, c)).sum::<f64>() / total)
        .collect();
    Ok(finish("random-walk", &cur, t, dev, tol, &ones, predicted))
}

/// Iterate `D^{-1/2} A D^{-1/2}` until every column is proportional to `√d`
/// within `tol`. The reported rows are `x_i / √d_i`, predicted to equal
/// `Σ_j √d_j x_j / Σd`.
pub fn verify_convergence_sym(
    g: &Graph,
    x: &FeatureMatrix,
    t_max: usize,
    tol: f64,
) -> Result<ConvergenceReport> {
    check_rows(g, x.data())?;
    require_theorem_preconditions(g)?;
    let sqrt_d: Vec<f64> = (0..g.node_count()).map(|u| g.weighted_degree(u).sqrt()).collect();
    let (cur, t, dev) = iterate_until_flat(g, x.data(), t_max, tol, &sqrt_d, symmetric_step);
    let total: f64 = sqrt_d.iter().map(|s| s * s).sum();
    let predicted = (0..x.ncols())
        .map(|c| (0..x.nrows()).map(|r| sqrt_d[r] * x.get(r, c)).sum::<f64>() / total)
        .collect();
    Ok(finish("symmetric", &cur, t, dev, tol, &sqrt_d, predicted))
}

pub const SPECTRUM_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Eigenvalues of `D^{-1/2} A D^{-1/2}`, descending.
    pub eigenvalues: Vec<f64>,
    pub max: f64,
    pub min: f64,
    /// Eigenvalues within `1e-9` of 1.
    pub count_at_one: usize,
    pub components_with_edges: usize,
    pub bipartite_components: usize,
    pub attains_minus_one: bool,
    /// All eigenvalues in `(−1 − 1e-9, 1 + 1e-9]`, the multiplicity of 1 equals
    /// the number of non-trivial components, and −1 is attained exactly when a
    /// bipartite component exists.
    pub consistent: bool,
}

/// Dense symmetric operator `D^{-1/2} A D^{-1/2}`.
pub fn symmetric_operator(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    if n > SPECTRUM_LIMIT {
        return Err(Error::TooLarge(format!("graph with {n} nodes"), SPECTRUM_LIMIT));
    }
    Ok(symmetric_step(g, &DMatrix::identity(n, n)))
}

pub fn spectrum_check(g: &Graph) -> Result<SpectrumReport> {
    const EPS: f64 = 1e-9;
    let s = symmetric_operator(g)?;
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let max = eigenvalues.first().copied().unwrap_or(0.0);
    let min = eigenvalues.last().copied().unwrap_or(0.0);
    let count_at_one = eigenvalues.iter().filter(|&&l| (l - 1.0).abs() <= EPS).count();
    let attains_minus_one = eigenvalues.iter().any(|&l| (l + 1.0).abs() <= EPS);

    let comps = connected_components(g);
    let mut components_with_edges = 0;
    let mut bipartite_components = 0;
    for members in comps.classes() {
        if members.len() < 2 {
            continue;
        }
        components_with_edges += 1;
        if component_is_bipartite(g, &members) {
            bipartite_components += 1;
        }
    }
    let in_range = eigenvalues.iter().all(|&l| l > -1.0 - EPS && l <= 1.0 + EPS);
    let consistent = in_range
        && count_at_one == components_with_edges
        && attains_minus_one == (bipartite_components > 0);
    Ok(SpectrumReport {
        eigenvalues,
        max,
        min,
        count_at_one,
        components_with_edges,
        bipartite_components,
        attains_minus_one,
        consistent,
    })
}

fn component_is_bipartite(g: &Graph, members: &[usize]) -> bool {
    let mut color = vec![u8::MAX; g.node_count()];
    let mut stack = vec![members[0]];
    color[members[0]] = 0;
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if color[v] == u8::MAX {
                color[v] = 1 - color[u];
                stack.push(v);
            } else if color[v] == color[u] {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_barbell, gen_clique, gen_star};

    fn column(values: &[f64]) -> FeatureMatrix {
        FeatureMatrix::column_vector(values, "x").unwrap()
    }

    #[test]
    fn triangle_rw_limit() {
        let g = gen_clique(3).unwrap();
        let cfg = DiffusionConfig::new(OperatorKind::RandomWalk, 200);
        let out = diffuse(&g, &column(&[0.0, 1.0, 2.0]), &cfg).unwrap();
        for i in 0..3 {
            assert!((out.get(i, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_steps_is_identity() {
        let (g, _) = gen_barbell(4).unwrap();
        let x = column(&(0..8).map(|i| i as f64).collect::<Vec<_>>());
        for op in [
            OperatorKind::RandomWalk,
            OperatorKind::Symmetric,
            OperatorKind::ThetaLaplacian,
            OperatorKind::GcnStep,
            OperatorKind::Aggregator,
        ] {
            assert_eq!(diffuse(&g, &x, &DiffusionConfig::new(op, 0)).unwrap(), x);
        }
    }

    #[test]
    fn isolated_node_named() {
        let g = Graph::from_unweighted(3, &[(0, 1)]).unwrap();
        let err = diffuse(&g, &column(&[1.0, 2.0, 3.0]), &DiffusionConfig::default()).unwrap_err();
        assert!(err.to_string().contains("node 2"), "{err}");
        let sym = DiffusionConfig::new(OperatorKind::Symmetric, 1);
        let out = diffuse(&g, &column(&[1.0, 2.0, 3.0]), &sym).unwrap();
        assert_eq!(out.get(2, 0), 0.0);
    }

    #[test]
    fn theta_one_is_identity() {
        let (g, _) = gen_barbell(4).unwrap();
        let x = column(&(0..8).map(|i| (i * i) as f64).collect::<Vec<_>>());
        let cfg = DiffusionConfig {
            operator: OperatorKind::ThetaLaplacian,
            theta: 1.0,
            steps: 7,
            ..Default::default()
        };
        assert_eq!(diffuse(&g, &x, &cfg).unwrap(), x);
    }

    #[test]
    fn gcn_identity_linear_matches_symmetric() {
        let (g, _) = gen_barbell(4).unwrap();
        let x = column(&(0..8).map(|i| i as f64).collect::<Vec<_>>());
        let gcn = DiffusionConfig {
            operator: OperatorKind::GcnStep,
            steps: 4,
            activation: Activation::Linear,
            identity_weights: true,
            ..Default::default()
        };
        let a = diffuse(&g, &x, &gcn).unwrap();
        let b = diffuse(&g, &x, &DiffusionConfig::new(OperatorKind::Symmetric, 4)).unwrap();
        assert!((a.data() - b.data()).amax() < 1e-12);
    }

    #[test]
    fn gcn_weights_are_seeded_and_bounded() {
        let w = gcn_weights(4, 0, 11);
        assert_eq!(w, gcn_weights(4, 0, 11));
        assert_ne!(w, gcn_weights(4, 1, 11));
        assert!(w.iter().all(|v| v.abs() <= 0.5));
    }

    #[test]
    fn triangle_convergence() {
        let g = gen_clique(3).unwrap();
        let r = verify_convergence_rw(&g, &column(&[0.0, 1.0, 2.0]), 10_000, 1e-10).unwrap();
        assert!(r.converged && r.t_reached <= 60, "{r:?}");
        assert!((r.limit[0] - 1.0).abs() < 1e-10);
        let s = verify_convergence_sym(&g, &column(&[0.0, 1.0, 2.0]), 10_000, 1e-10).unwrap();
        assert!(s.converged && s.analytic_match);
    }

    #[test]
    fn bipartite_rejected() {
        let edge = Graph::from_unweighted(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            verify_convergence_rw(&edge, &column(&[0.0, 1.0]), 100, 1e-8),
            Err(Error::Precondition(_))
        ));
        let star = gen_star(4).unwrap();
        let x = column(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(matches!(
            verify_convergence_sym(&star, &x, 100, 1e-8),
            Err(Error::Precondition(_))
        ));
        let two = Graph::from_unweighted(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(verify_convergence_rw(&two, &column(&[0.0; 6]), 10, 1e-8).is_err());
    }

    #[test]
    fn spectra() {
        let tri = spectrum_check(&gen_clique(3).unwrap()).unwrap();
        let expect = [1.0, -0.5, -0.5];
        for (l, e) in tri.eigenvalues.iter().zip(expect) {
            assert!((l - e).abs() < 1e-12);
        }
        assert!(tri.consistent);

        let edge = spectrum_check(&Graph::from_unweighted(2, &[(0, 1)]).unwrap()).unwrap();
        assert!((edge.min + 1.0).abs() < 1e-12 && edge.attains_minus_one && edge.consistent);

        let bar = spectrum_check(&gen_barbell(5).unwrap().0).unwrap();
        assert_eq!(bar.count_at_one, 1);
        assert!(bar.min > -1.0 && bar.consistent);
    }

    #[test]
    fn one_step_star() {
        let g = gen_star(4).unwrap();
        let deg = column(&[4.0, 1.0, 1.0, 1.0, 1.0]);
        let out = motif_feature_one_step(&g, &deg, Aggregator::Mean).unwrap();
        assert_eq!(out.ncols(), 2);
        assert_eq!(out.row(0), vec![4.0, 1.0]);
        for leaf in 1..5 {
            assert_eq!(out.row(leaf), vec![1.0, 4.0]);
        }
        assert_eq!(out.labels()[1], "mean(x)");
    }

    #[test]
    fn aggregators() {
        let g = gen_star(3).unwrap();
        let x = DMatrix::from_column_slice(4, 1, &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(aggregate(&g, &x, Aggregator::Sum)[(0, 0)], 6.0);
        assert_eq!(aggregate(&g, &x, Aggregator::Min)[(0, 0)], 1.0);
        assert_eq!(aggregate(&g, &x, Aggregator::Max)[(0, 0)], 3.0);
        assert_eq!(aggregate(&g, &x, Aggregator::Mean)[(0, 0)], 2.0);
    }
}
