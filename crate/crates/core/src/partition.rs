//! Node partitions, role assignments and induced role graphs.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Surjective map from nodes onto classes `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

/// A role assignment is a partition whose classes are read as roles.
pub type RoleAssignment = Partition;

impl Partition {
    /// Build from class labels; every class in `0..=max` must be used.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; k];
        for &l in &labels {
            used[l] = true;
        }
        if let Some(empty) = used.iter().position(|&u| !u) {
            return Err(Error::invalid(format!("class {empty} has no members")));
        }
        Ok(Partition { labels, k })
    }

    /// Build from arbitrary hashable keys; classes are numbered by first
    /// appearance.
    pub fn from_keys<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let labels: Vec<usize> = keys
            .into_iter()
            .map(|key| {
                let next = ids.len();
                *ids.entry(key).or_insert(next)
            })
            .collect();
        let k = ids.len();
        Partition { labels, k }
    }

    pub(crate) fn from_labels_unchecked(labels: Vec<usize>, k: usize) -> Self {
        Partition { labels, k }
    }

    /// Every node in its own class.
    pub fn discrete(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            k: n,
        }
    }

    /// All nodes in one class.
    pub fn single(n: usize) -> Self {
        Partition {
            labels: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn class_of(&self, u: usize) -> usize {
        self.labels[u]
    }

    /// Members of each class, ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (u, &c) in self.labels.iter().enumerate() {
            out[c].push(u);
        }
        out
    }

    /// Relabel classes by order of first appearance.
    pub fn canonical(&self) -> Self {
        Partition::from_keys(self.labels.iter().copied())
    }

    /// Same grouping, regardless of class numbering.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        self.len() == other.len() && self.canonical().labels == other.canonical().labels
    }

    /// True when every class of `self` lies inside one class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image: Vec<Option<usize>> = vec![None; self.k];
        for (u, &c) in self.labels.iter().enumerate() {
            let target = coarser.labels[u];
            match image[c] {
                None => image[c] = Some(target),
                Some(t) if t != target => return false,
                _ => {}
            }
        }
        true
    }

    /// Write as TSV: `# k=<count>` header, then `node_id<TAB>class_id` rows.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# k={}", self.k)?;
        for (u, c) in self.labels.iter().enumerate() {
            writeln!(w, "{u}\t{c}")?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(r: R) -> Result<Self> {
        let mut rows: Vec<(usize, usize)> = Vec::new();
        let mut declared_k = None;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("# k=") {
                declared_k = Some(rest.trim().parse::<usize>().map_err(|_| {
                    Error::invalid(format!("line {}: bad class count `{rest}`", i + 1))
                })?);
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split('\t');
            let parse = |s: Option<&str>| -> Result<usize> {
                s.and_then(|t| t.trim().parse().ok())
                    .ok_or_else(|| Error::invalid(format!("line {}: expected `node\\tclass`", i + 1)))
            };
            rows.push((parse(it.next())?, parse(it.next())?));
        }
        rows.sort_unstable();
        for (i, &(u, _)) in rows.iter().enumerate() {
            if u != i {
                return Err(Error::invalid(format!("node ids must be 0..n, missing {i}")));
            }
        }
        let p = Partition::from_labels(rows.into_iter().map(|(_, c)| c).collect())?;
        if let Some(k) = declared_k {
            if k != p.k {
                return Err(Error::invalid(format!(
                    "header declares k={k} but {} classes are used",
                    p.k
                )));
            }
        }
        Ok(p)
    }
}

/// Super-graph over roles: `(a, b)` is a super-edge iff some graph edge joins
/// a node of role `a` to a node of role `b`. Self super-edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleGraph {
    pub k: usize,
    /// Super-edges stored once as `(a, b)` with `a <= b`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl RoleGraph {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Roles adjacent to `a` in the role graph (including `a` itself when it
    /// carries a self super-edge).
    pub fn neighbors(&self, a: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Apply a role relabeling `perm[a]`.
    pub fn relabeled(&self, perm: &[usize]) -> RoleGraph {
        RoleGraph {
            k: self.k,
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (perm[a], perm[b]);
                    (x.min(y), x.max(y))
                })
                .collect(),
        }
    }
}

/// Role graph induced by `roles` on `g`.
pub fn build_role_graph(g: &Graph, roles: &RoleAssignment) -> Result<RoleGraph> {
    role_graph_from_labels(g, roles.labels(), roles.class_count())
}

/// Role graph from raw labels, validating that every label is below `k`.
pub fn role_graph_from_labels(g: &Graph, labels: &[usize], k: usize) -> Result<RoleGraph> {
    if labels.len() != g.node_count() {
        return Err(Error::invalid(format!(
            "role assignment covers {} nodes, graph has {}",
            labels.len(),
            g.node_count()
        )));
    }
    if let Some((u, &c)) = labels.iter().enumerate().find(|&(_, &c)| c >= k) {
        return Err(Error::invalid(format!(
            "node {u} has role {c}, outside 0..{k}"
        )));
    }
    let edges = g
        .edges()
        .map(|(u, v, _)| {
            let (a, b) = (labels[u], labels[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    Ok(RoleGraph { k, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_barbell, gen_clique, gen_star};

    #[test]
    fn from_labels_rejects_gaps() {
        assert!(Partition::from_labels(vec![0, 2]).is_err());
        assert_eq!(Partition::from_labels(vec![1, 0, 1]).unwrap().class_count(), 2);
    }

    #[test]
    fn refinement_relation() {
        let fine = Partition::from_labels(vec![0, 1, 2, 2]).unwrap();
        let coarse = Partition::from_labels(vec![0, 0, 1, 1]).unwrap();
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(coarse.refines(&coarse));
    }

    #[test]
    fn tsv_round_trip() {
        let p = Partition::from_labels(vec![1, 0, 1, 2]).unwrap();
        let mut buf = Vec::new();
        p.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# k=3\n0\t1\n"));
        assert_eq!(Partition::read_tsv(&buf[..]).unwrap(), p);
    }

    #[test]
    fn star_role_graph_single_cross_edge() {
        let g = gen_star(4).unwrap();
        let r = Partition::from_labels(vec![0, 1, 1, 1, 1]).unwrap();
        let rg = build_role_graph(&g, &r).unwrap();
        assert_eq!(rg.edges.iter().copied().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn clique_one_role_self_loop() {
        let g = gen_clique(4).unwrap();
        let rg = build_role_graph(&g, &Partition::single(4)).unwrap();
        assert_eq!(rg.edges.iter().copied().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn barbell_interior_endpoint_role_graph() {
        let (g, _) = gen_barbell(5).unwrap();
        // endpoints of the bridge are 4 and 5
        let labels: Vec<usize> = (0..10).map(|u| usize::from(u == 4 || u == 5)).collect();
        let rg = build_role_graph(&g, &Partition::from_labels(labels).unwrap()).unwrap();
        // oracle: map every edge to its role pair
        let mut expect = BTreeSet::new();
        for (u, v, _) in g.edges() {
            let (a, b) = (usize::from(u == 4 || u == 5), usize::from(v == 4 || v == 5));
            expect.insert((a.min(b), a.max(b)));
        }
        assert_eq!(rg.edges, expect);
        assert_eq!(rg.edges.len(), 3);
    }

    #[test]
    fn out_of_range_role_rejected() {
        let g = gen_star(2).unwrap();
        assert!(role_graph_from_labels(&g, &[0, 1, 3], 2).is_err());
    }

    #[test]
    fn relabeling_gives_isomorphic_role_graph() {
        let (g, _) = gen_barbell(4).unwrap();
        let labels: Vec<usize> = (0..8).map(|u| usize::from(u == 3 || u == 4)).collect();
        let swapped: Vec<usize> = labels.iter().map(|&c| 1 - c).collect();
        let a = role_graph_from_labels(&g, &labels, 2).unwrap();
        let b = role_graph_from_labels(&g, &swapped, 2).unwrap();
        assert_eq!(a.relabeled(&[1, 0]), b);
    }
}
