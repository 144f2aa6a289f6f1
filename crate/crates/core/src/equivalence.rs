//! Node equivalences: computing partitions and verifying role assignments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::Graph;
use crate::partition::{build_role_graph, Partition, RoleAssignment, RoleGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Neighborhood {
    /// `N(u)`: clique nodes are pairwise distinct.
    Open,
    /// `N(u) ∪ {u}`: clique nodes coincide.
    Closed,
}

/// Classes of nodes with identical neighbor sets.
pub fn structural_equivalence_partition(g: &Graph, mode: Neighborhood) -> Partition {
    Partition::from_keys((0..g.node_count()).map(|u| {
        let mut key = g.neighbors(u).to_vec();
        if mode == Neighborhood::Closed {
            let pos = key.binary_search(&u).unwrap_err();
            key.insert(pos, u);
        }
        key
    }))
}

/// Degree classes.
pub fn degree_partition(g: &Graph) -> Partition {
    Partition::from_keys((0..g.node_count()).map(|u| g.degree(u)))
}

fn refine(g: &Graph, start: &Partition, multiset: bool) -> Partition {
    let mut cur = start.canonical();
    loop {
        let next = Partition::from_keys((0..g.node_count()).map(|u| {
            let mut seen: Vec<usize> = g.neighbors(u).iter().map(|&v| cur.class_of(v)).collect();
            seen.sort_unstable();
            if !multiset {
                seen.dedup();
            }
            (cur.class_of(u), seen)
        }));
        if next.class_count() == cur.class_count() {
            return cur;
        }
        cur = next;
    }
}

/// Coarsest refinement of `start` in which same-class nodes see the same set
/// of neighbor classes.
pub fn refine_regular(g: &Graph, start: &Partition) -> Partition {
    refine(g, start, false)
}

/// Coarsest refinement of `start` in which same-class nodes see the same
/// multiset of neighbor classes (color refinement).
pub fn refine_exact(g: &Graph, start: &Partition) -> Partition {
    refine(g, start, true)
}

/// Regular equivalence by set-based refinement seeded with the degree
/// partition. Seeded with a single class the refinement never splits a graph
/// without isolated nodes, since every node then sees the set `{0}`.
pub fn regular_equivalence_partition(g: &Graph) -> Partition {
    refine_regular(g, &degree_partition(g))
}

/// Coarsest exact role assignment: color refinement from a single class.
pub fn exact_role_partition(g: &Graph) -> Partition {
    refine_exact(g, &Partition::single(g.node_count()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceKind {
    Structural,
    Regular,
    Exact,
    StrongStructural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrongReading {
    /// Every graph edge maps to a super-edge and every super-edge is realized
    /// by at least one graph edge.
    PerEdge,
    /// Per-edge, and additionally every node of role `a` has a role-`b`
    /// neighbor for each super-edge `(a, b)`.
    Universal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub u: usize,
    pub v: Option<usize>,
    pub condition: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub kind: EquivalenceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reading: Option<StrongReading>,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl EquivalenceReport {
    fn new(kind: EquivalenceKind, reading: Option<StrongReading>, witness: Option<Witness>) -> Self {
        EquivalenceReport {
            kind,
            reading,
            holds: witness.is_none(),
            witness,
        }
    }
}

fn check_total(g: &Graph, r: &RoleAssignment) -> Result<()> {
    if r.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "role assignment covers {} nodes, graph has {}",
            r.len(),
            g.node_count()
        )));
    }
    Ok(())
}

fn neighbor_roles(g: &Graph, r: &RoleAssignment, u: usize, multiset: bool) -> Vec<usize> {
    let mut s: Vec<usize> = g.neighbors(u).iter().map(|&v| r.class_of(v)).collect();
    s.sort_unstable();
    if !multiset {
        s.dedup();
    }
    s
}

fn describe(roles: &[usize], multiset: bool) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in roles {
        *counts.entry(r).or_default() += 1;
    }
    let parts: Vec<String> = counts
        .iter()
        .map(|(r, c)| if multiset { format!("r{r}×{c}") } else { format!("r{r}") })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn same_neighbor_roles(g: &Graph, r: &RoleAssignment, multiset: bool, kind: EquivalenceKind) -> Result<EquivalenceReport> {
    check_total(g, r)?;
    let sig: Vec<Vec<usize>> = (0..g.node_count()).map(|u| neighbor_roles(g, r, u, multiset)).collect();
    for u in 0..g.node_count() {
        for v in u + 1..g.node_count() {
            if r.class_of(u) == r.class_of(v) && sig[u] != sig[v] {
                let what = if multiset { "multisets" } else { "sets" };
                let condition = format!(
                    "same role r{} but neighbor-role {what} differ: {} vs {}",
                    r.class_of(u),
                    describe(&sig[u], multiset),
                    describe(&sig[v], multiset)
                );
                return Ok(EquivalenceReport::new(
                    kind,
                    None,
                    Some(Witness { u, v: Some(v), condition }),
                ));
            }
        }
    }
    Ok(EquivalenceReport::new(kind, None, None))
}

/// Same-role nodes must see identical multisets of neighbor roles.
pub fn verify_exact_role_assignment(g: &Graph, r: &RoleAssignment) -> Result<EquivalenceReport> {
    same_neighbor_roles(g, r, true, EquivalenceKind::Exact)
}

/// Same-role nodes must see identical sets of neighbor roles.
pub fn verify_regular_assignment(g: &Graph, r: &RoleAssignment) -> Result<EquivalenceReport> {
    same_neighbor_roles(g, r, false, EquivalenceKind::Regular)
}

/// Same-class nodes must have identical neighbor sets.
pub fn verify_structural_assignment(g: &Graph, r: &RoleAssignment, mode: Neighborhood) -> Result<EquivalenceReport> {
    check_total(g, r)?;
    let s = structural_equivalence_partition(g, mode);
    for u in 0..g.node_count() {
        for v in u + 1..g.node_count() {
            if r.class_of(u) == r.class_of(v) && s.class_of(u) != s.class_of(v) {
                return Ok(EquivalenceReport::new(
                    EquivalenceKind::Structural,
                    None,
                    Some(Witness {
                        u,
                        v: Some(v),
                        condition: "same role but different neighbor sets".into(),
                    }),
                ));
            }
        }
    }
    Ok(EquivalenceReport::new(EquivalenceKind::Structural, None, None))
}

/// Check a role assignment against a role graph under the chosen reading.
pub fn verify_strong_structural_assignment(
    g: &Graph,
    r: &RoleAssignment,
    role_graph: &RoleGraph,
    reading: StrongReading,
) -> Result<EquivalenceReport> {
    check_total(g, r)?;
    let kind = EquivalenceKind::StrongStructural;
    let fail = |u, v, condition: String| {
        Ok(EquivalenceReport::new(kind, Some(reading), Some(Witness { u, v, condition })))
    };
    for (u, v, _) in g.edges() {
        let (a, b) = (r.class_of(u), r.class_of(v));
        if !role_graph.has_edge(a, b) {
            return fail(u, Some(v), format!("edge maps to (r{a}, r{b}), which is not a super-edge"));
        }
    }
    let realized = build_role_graph(g, r)?;
    for &(a, b) in &role_graph.edges {
        if !realized.has_edge(a, b) {
            let u = (0..g.node_count()).find(|&u| r.class_of(u) == a).unwrap_or(0);
            return fail(u, None, format!("super-edge (r{a}, r{b}) is realized by no graph edge"));
        }
    }
    if reading == StrongReading::Universal {
        for u in 0..g.node_count() {
            let a = r.class_of(u);
            let seen = neighbor_roles(g, r, u, false);
            for b in role_graph.neighbors(a) {
                if seen.binary_search(&b).is_err() {
                    return fail(
                        u,
                        None,
                        format!("node of role r{a} has no neighbor of role r{b} although (r{a}, r{b}) is a super-edge"),
                    );
                }
            }
        }
    }
    Ok(EquivalenceReport::new(kind, Some(reading), None))
}

/// Classes of identical feature rows (`tol == 0`), or the single-linkage
/// closure of rows within `tol` in every coordinate.
pub fn feature_equivalence_partition(x: &FeatureMatrix, tol: f64) -> Result<Partition> {
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be >= 0"));
    }
    let n = x.nrows();
    if tol == 0.0 {
        return Ok(Partition::from_keys((0..n).map(|i| {
            x.row(i).iter().map(|&v| (v + 0.0).to_bits()).collect::<Vec<u64>>()
        })));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| x.row(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rows[i].iter().zip(&rows[j]).all(|(a, b)| (a - b).abs() <= tol) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    Ok(Partition::from_keys((0..n).map(|i| find(&mut parent, i))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// Cosine similarity of nonnegative vectors.
    Cosine,
    Rbf { sigma: f64 },
}

pub fn kernel_value(a: &[f64], b: &[f64], kernel: Kernel) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid("feature vectors differ in length"));
    }
    match kernel {
        Kernel::Cosine => {
            if a.iter().chain(b).any(|&v| v < 0.0) {
                return Err(Error::invalid("cosine kernel expects nonnegative vectors"));
            }
            Ok(crate::stats::cosine(a, b).clamp(0.0, 1.0))
        }
        Kernel::Rbf { sigma } => {
            if !(sigma > 0.0) {
                return Err(Error::invalid("RBF bandwidth must be > 0"));
            }
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            Ok((-d2 / (2.0 * sigma * sigma)).exp())
        }
    }
}

/// `K(a, b) ≥ 1 − ε`.
pub fn epsilon_structural_similarity(a: &[f64], b: &[f64], kernel: Kernel, eps: f64) -> Result<bool> {
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be > 0"));
    }
    Ok(kernel_value(a, b, kernel)? >= 1.0 - eps)
}
