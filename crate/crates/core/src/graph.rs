//! Immutable undirected graph in compressed sparse row form.

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Simple undirected graph with optional positive edge weights.
///
/// Neighbor lists are sorted ascending, symmetric and free of self-loops; the
/// constructors enforce this, so every `Graph` value upholds it.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Option<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Unweighted graph from an edge list. Duplicate edges collapse into one.
    pub fn from_unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            check_endpoints(n, u, v)?;
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in adj {
            list.sort_unstable();
            list.dedup();
            targets.extend(list);
            offsets.push(targets.len());
        }
        Ok(Graph {
            offsets,
            targets,
            weights: None,
            labels: None,
        })
    }

    /// Weighted graph from an edge list; duplicate edges are collapsed by
    /// summing their weights.
    pub fn from_weighted(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut adj: Vec<HashMap<usize, f64>> = vec![HashMap::new(); n];
        for &(u, v, w) in edges {
            check_endpoints(n, u, v)?;
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has weight {w}; weights must be finite and positive"
                )));
            }
            *adj[u].entry(v).or_insert(0.0) += w;
            *adj[v].entry(u).or_insert(0.0) += w;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for map in adj {
            let mut list: Vec<(usize, f64)> = map.into_iter().collect();
            list.sort_unstable_by_key(|&(v, _)| v);
            for (v, w) in list {
                targets.push(v);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Ok(Graph {
            offsets,
            targets,
            weights: Some(weights),
            labels: None,
        })
    }

    /// Attach external node labels (one per node, in id order).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::invalid(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.node_count()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// External label of `u`, or its id when the graph carries no labels.
    pub fn label(&self, u: usize) -> String {
        match &self.labels {
            Some(l) => l[u].clone(),
            None => u.to_string(),
        }
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Weights aligned with [`Graph::neighbors`]; `None` for unweighted graphs.
    #[inline]
    pub fn neighbor_weights(&self, u: usize) -> Option<&[f64]> {
        self.weights
            .as_ref()
            .map(|w| &w[self.offsets[u]..self.offsets[u + 1]])
    }

    /// Iterate `(neighbor, weight)` pairs; weight is 1 for unweighted graphs.
    pub fn weighted_neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let ws = self.neighbor_weights(u);
        self.neighbors(u)
            .iter()
            .enumerate()
            .map(move |(i, &v)| (v, ws.map_or(1.0, |w| w[i])))
    }

    /// Number of neighbors (ignores weights).
    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Weighted degree: row sum of the adjacency matrix.
    pub fn weighted_degree(&self, u: usize) -> f64 {
        match self.neighbor_weights(u) {
            Some(w) => w.iter().sum(),
            None => self.degree(u) as f64,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let i = self.neighbors(u).binary_search(&v).ok()?;
        Some(self.neighbor_weights(u).map_or(1.0, |w| w[i]))
    }

    /// Undirected edges `(u, v, w)` with `u < v`, in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.weighted_neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn isolated_nodes(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&u| self.degree(u) == 0).collect()
    }

    /// Check the structural invariants. Always true for graphs built through
    /// the public constructors; exposed for tests and for external data.
    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        for u in 0..n {
            let nb = self.neighbors(u);
            for (i, &v) in nb.iter().enumerate() {
                if v >= n {
                    return Err(Error::invalid(format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(Error::invalid(format!("self-loop at {u}")));
                }
                if i > 0 && nb[i - 1] >= v {
                    return Err(Error::invalid(format!("neighbor list of {u} not sorted")));
                }
                match (self.edge_weight(u, v), self.edge_weight(v, u)) {
                    (Some(a), Some(b)) if a == b && a > 0.0 => {}
                    _ => {
                        return Err(Error::invalid(format!("edge ({u}, {v}) not symmetric")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabel nodes: node `u` of `self` becomes node `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::invalid("permutation length differs from node count"));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("not a permutation"));
            }
        }
        let edges: Vec<_> = self.edges().map(|(u, v, w)| (perm[u], perm[v], w)).collect();
        if self.is_weighted() {
            Graph::from_weighted(n, &edges)
        } else {
            let e: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
            Graph::from_unweighted(n, &e)
        }
    }

    /// Disjoint union; node ids of later graphs are shifted past earlier ones.
    pub fn disjoint_union(parts: &[&Graph]) -> Result<Self> {
        let mut shift = 0;
        let mut edges = Vec::new();
        let weighted = parts.iter().any(|g| g.is_weighted());
        for g in parts {
            edges.extend(g.edges().map(|(u, v, w)| (u + shift, v + shift, w)));
            shift += g.node_count();
        }
        if weighted {
            Graph::from_weighted(shift, &edges)
        } else {
            let e: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
            Graph::from_unweighted(shift, &e)
        }
    }

    /// Copy of the graph without the undirected edge `{u, v}`.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self> {
        let edges: Vec<_> = self
            .edges()
            .filter(|&(a, b, _)| !((a == u && b == v) || (a == v && b == u)))
            .collect();
        if self.is_weighted() {
            Graph::from_weighted(self.node_count(), &edges)
        } else {
            let e: Vec<_> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
            Graph::from_unweighted(self.node_count(), &e)
        }
    }
}

fn check_endpoints(n: usize, u: usize, v: usize) -> Result<()> {
    if u >= n || v >= n {
        return Err(Error::invalid(format!(
            "edge ({u}, {v}) references a node outside 0..{n}"
        )));
    }
    if u == v {
        return Err(Error::invalid(format!("self-loop at node {u} is not allowed")));
    }
    Ok(())
}

/// Read a whitespace-separated edge list.
///
/// Each non-empty, non-`#` line holds two node tokens and an optional weight.
/// Tokens map to dense ids in order of first appearance; the token strings are
/// kept as node labels. Duplicate edges collapse with summed weights.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, path)
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut weighted = false;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(parse_err(
                line_no,
                format!("expected `u v [weight]`, found {} tokens", toks.len()),
            ));
        }
        let w = match toks.get(2) {
            Some(t) => {
                weighted = true;
                let w: f64 = t
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("weight `{t}` is not a number")))?;
                if w < 0.0 {
                    return Err(Error::Validation(format!(
                        "line {line_no}: negative weight {w}"
                    )));
                }
                w
            }
            None => 1.0,
        };
        let mut id = |tok: &str| -> usize {
            if let Some(&id) = ids.get(tok) {
                return id;
            }
            let id = labels.len();
            ids.insert(tok.to_string(), id);
            labels.push(tok.to_string());
            id
        };
        let (u, v) = (id(toks[0]), id(toks[1]));
        if u == v {
            return Err(Error::Validation(format!(
                "line {line_no}: self-loop on `{}` is not allowed",
                toks[0]
            )));
        }
        edges.push((u, v, w));
    }

    let n = labels.len();
    let duplicated = {
        let mut keys: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(u, v, _)| (u.min(v), u.max(v)))
            .collect();
        keys.sort_unstable();
        keys.windows(2).any(|w| w[0] == w[1])
    };
    let g = if weighted || duplicated {
        Graph::from_weighted(n, &edges)?
    } else {
        let e: Vec<_> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        Graph::from_unweighted(n, &e)?
    };
    g.with_labels(labels)
}

/// Weighted row sums of the adjacency matrix.
pub fn degree_vector(g: &Graph) -> Vec<f64> {
    (0..g.node_count()).map(|u| g.weighted_degree(u)).collect()
}

/// Two-colorability via BFS over every component.
pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.node_count();
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &v in g.neighbors(u) {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Connected components labelled in order of their smallest node.
pub fn connected_components(g: &Graph) -> Partition {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut k = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = k;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = k;
                    queue.push_back(v);
                }
            }
        }
        k += 1;
    }
    Partition::from_labels_unchecked(label, k)
}

pub fn is_connected(g: &Graph) -> bool {
    g.node_count() > 0 && connected_components(g).class_count() == 1
}

/// Hop distances from `src`; `None` for unreachable nodes.
pub fn bfs_distances(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.node_count()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Hop diameter of the graph (max over finite distances).
pub fn diameter(g: &Graph) -> usize {
    (0..g.node_count())
        .flat_map(|s| bfs_distances(g, s))
        .flatten()
        .max()
        .unwrap_or(0)
}
