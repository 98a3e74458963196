//! Canonical pNUMA and vNUMA graphs.
//!
//! Vertex labels are 1-based everywhere. The fixed labelings below are the
//! ones every closed form in [`crate::formulas`] is written against:
//!
//! * `c4`: cycle 1-2-3-4-1.
//! * `k{n}`: complete graph on 1..n.
//! * `l4`: ladder with rungs (1,2), (3,4), (5,6), (7,8) and rails 1-4-5-8,
//!   2-3-6-7. Parts are odd and even labels.
//! * `cq3`: `l4` plus the cross edges (1,7) and (2,8).
//! * `q33`: complete bipartite between odd and even labels.
//! * `k{m}_{n}`: part A is 1..m, part B is m+1..m+n. `star{n}` is `k1_{n}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{self, Capacity};

/// Largest host graph [`enumerate_embeddings`] accepts.
pub const MAX_EMBEDDING_VERTICES: usize = 12;

/// Undirected simple graph on vertices `1..=vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(
        name: impl Into<String>,
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let name = name.into();
        if vertex_count == 0 {
            return Err(Error::InvalidGraph(format!("{name}: no vertices")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("{name}: self-loop at {a}")));
            }
            for v in [a, b] {
                if v == 0 || v > vertex_count {
                    return Err(Error::InvalidGraph(format!(
                        "{name}: edge ({a},{b}) outside 1..{vertex_count}"
                    )));
                }
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!(
                    "{name}: duplicate edge ({a},{b})"
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); vertex_count + 1];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            name,
            vertex_count,
            edges: set,
            adjacency,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(low, high)` label pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.vertex_count
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Sorted neighbors of `v`. Panics if `v` is not a vertex.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        assert!(
            (1..=self.vertex_count).contains(&v),
            "vertex {v} not in {}",
            self.name
        );
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.vertices().map(|v| self.degree(v)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == self.vertex_count
    }

    /// Two-coloring of the graph, or `None` when it has an odd cycle. The
    /// first part contains the smallest label of each connected component.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut color: Vec<Option<bool>> = vec![None; self.vertex_count + 1];
        for start in self.vertices() {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let c = color[v].unwrap();
                for &u in &self.adjacency[v] {
                    match color[u] {
                        None => {
                            color[u] = Some(!c);
                            stack.push(u);
                        }
                        Some(cu) if cu == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (a, b): (Vec<usize>, Vec<usize>) =
            self.vertices().partition(|&v| color[v] == Some(false));
        Some((a, b))
    }

    /// Returns a copy without the given edges.
    pub fn without_edges(&self, name: impl Into<String>, removed: &[(usize, usize)]) -> Result<Self> {
        let drop: BTreeSet<(usize, usize)> =
            removed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        Graph::new(
            name,
            self.vertex_count,
            self.edges.iter().copied().filter(|e| !drop.contains(e)),
        )
    }

    /// Does the subgraph induced by `subset` contain a copy of `pattern`?
    pub fn contains_copy_on(&self, pattern: &Graph, subset: &[usize]) -> bool {
        if subset.len() != pattern.vertex_count {
            return false;
        }
        let mut image = vec![0usize; pattern.vertex_count + 1];
        let mut used = vec![false; subset.len()];
        self.extend_mapping(pattern, subset, 1, &mut image, &mut used)
    }

    fn extend_mapping(
        &self,
        pattern: &Graph,
        subset: &[usize],
        next: usize,
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if next > pattern.vertex_count {
            return true;
        }
        for slot in 0..subset.len() {
            if used[slot] {
                continue;
            }
            let host = subset[slot];
            let consistent = pattern
                .neighbors(next)
                .iter()
                .filter(|&&p| p < next)
                .all(|&p| self.has_edge(image[p], host));
            if consistent {
                used[slot] = true;
                image[next] = host;
                if self.extend_mapping(pattern, subset, next + 1, image, used) {
                    return true;
                }
                used[slot] = false;
            }
        }
        false
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} vertices, {} edges)", self.name, self.vertex_count, self.edges.len())
    }
}

/// Named topology with a fixed labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopologyId {
    K2,
    K3,
    C4,
    K4,
    /// Ladder P2 x P4.
    L4,
    /// Crossed cube.
    CQ3,
    /// Enhanced cube, isomorphic to K4,4.
    Q33,
    Complete(usize),
    CompleteBipartite(usize, usize),
    Star(usize),
}

impl TopologyId {
    /// Folds aliases onto one representative: `k2`/`k3`/`k4` for small
    /// complete graphs and `star{n}` for `k1_{n}`.
    pub fn canonical(self) -> Self {
        match self {
            TopologyId::Complete(2) => TopologyId::K2,
            TopologyId::Complete(3) => TopologyId::K3,
            TopologyId::Complete(4) => TopologyId::K4,
            TopologyId::CompleteBipartite(1, n) => TopologyId::Star(n),
            other => other,
        }
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            TopologyId::Complete(0) => Err(Error::InvalidTopology("k0 has no vertices".into())),
            TopologyId::CompleteBipartite(m, n) if m == 0 || n == 0 => Err(
                Error::InvalidTopology(format!("k{m}_{n} needs two non-empty parts")),
            ),
            TopologyId::Star(0) => Err(Error::InvalidTopology("star0 has no leaves".into())),
            other => Ok(other),
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            TopologyId::K2 => 2,
            TopologyId::K3 => 3,
            TopologyId::C4 | TopologyId::K4 => 4,
            TopologyId::L4 | TopologyId::CQ3 | TopologyId::Q33 => 8,
            TopologyId::Complete(n) => n,
            TopologyId::CompleteBipartite(m, n) => m + n,
            TopologyId::Star(n) => n + 1,
        }
    }

    /// Order of the complete graph this id denotes, if any.
    pub fn complete_order(self) -> Option<usize> {
        match self.canonical() {
            TopologyId::K2 => Some(2),
            TopologyId::K3 => Some(3),
            TopologyId::K4 => Some(4),
            TopologyId::Complete(n) => Some(n),
            _ => None,
        }
    }

    /// Part sizes `(m, n)` if the id denotes a complete bipartite graph
    /// labeled as `k{m}_{n}`.
    pub fn bipartite_parts(self) -> Option<(usize, usize)> {
        match self.canonical() {
            TopologyId::CompleteBipartite(m, n) => Some((m, n)),
            TopologyId::Star(n) => Some((1, n)),
            _ => None,
        }
    }

    pub fn expand(self) -> Result<Graph> {
        expand_topology(self)
    }
}

impl fmt::Display for TopologyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            TopologyId::K2 => f.write_str("k2"),
            TopologyId::K3 => f.write_str("k3"),
            TopologyId::C4 => f.write_str("c4"),
            TopologyId::K4 => f.write_str("k4"),
            TopologyId::L4 => f.write_str("l4"),
            TopologyId::CQ3 => f.write_str("cq3"),
            TopologyId::Q33 => f.write_str("q33"),
            TopologyId::Complete(n) => write!(f, "k{n}"),
            TopologyId::CompleteBipartite(m, n) => write!(f, "k{m}_{n}"),
            TopologyId::Star(n) => write!(f, "star{n}"),
        }
    }
}

impl FromStr for TopologyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseTopology(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        let number = |digits: &str| -> Result<usize> {
            if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            digits.parse().map_err(|_| bad())
        };
        let id = match lower.as_str() {
            "c4" => TopologyId::C4,
            "l4" => TopologyId::L4,
            "cq3" => TopologyId::CQ3,
            "q33" => TopologyId::Q33,
            other => {
                if let Some(rest) = other.strip_prefix("star") {
                    TopologyId::Star(number(rest)?)
                } else if let Some(rest) = other.strip_prefix('k') {
                    match rest.split_once('_') {
                        Some((m, n)) => TopologyId::CompleteBipartite(number(m)?, number(n)?),
                        None => TopologyId::Complete(number(rest)?),
                    }
                } else {
                    return Err(bad());
                }
            }
        };
        id.validate().map(TopologyId::canonical)
    }
}

impl Serialize for TopologyId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TopologyId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

const LADDER_EDGES: [(usize, usize); 10] = [
    (1, 2),
    (3, 4),
    (5, 6),
    (7, 8),
    (1, 4),
    (4, 5),
    (5, 8),
    (2, 3),
    (3, 6),
    (6, 7),
];

/// The two edges that turn `l4` into `cq3`.
pub const CQ3_CROSS_EDGES: [(usize, usize); 2] = [(1, 7), (2, 8)];

fn complete(name: String, n: usize) -> Result<Graph> {
    let edges = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b)));
    Graph::new(name, n, edges)
}

fn complete_bipartite(name: String, a: &[usize], b: &[usize]) -> Result<Graph> {
    let edges = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y)));
    Graph::new(name, a.len() + b.len(), edges)
}

/// Expands a topology id into its labeled graph.
pub fn expand_topology(id: TopologyId) -> Result<Graph> {
    let id = id.validate()?.canonical();
    let name = id.to_string();
    match id {
        TopologyId::K2 => complete(name, 2),
        TopologyId::K3 => complete(name, 3),
        TopologyId::K4 => complete(name, 4),
        TopologyId::Complete(n) => complete(name, n),
        TopologyId::C4 => Graph::new(name, 4, [(1, 2), (2, 3), (3, 4), (4, 1)]),
        TopologyId::L4 => Graph::new(name, 8, LADDER_EDGES),
        TopologyId::CQ3 => Graph::new(name, 8, LADDER_EDGES.into_iter().chain(CQ3_CROSS_EDGES)),
        TopologyId::Q33 => complete_bipartite(name, &[1, 3, 5, 7], &[2, 4, 6, 8]),
        TopologyId::CompleteBipartite(m, n) => {
            let a: Vec<usize> = (1..=m).collect();
            let b: Vec<usize> = (m + 1..=m + n).collect();
            complete_bipartite(name, &a, &b)
        }
        TopologyId::Star(n) => {
            let leaves: Vec<usize> = (2..=n + 1).collect();
            complete_bipartite(name, &[1], &leaves)
        }
    }
}

/// The vertex subsets of a host graph that carry a copy of a pattern graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSet {
    embeddings: Vec<Vec<usize>>,
}

impl EmbeddingSet {
    pub fn as_slice(&self) -> &[Vec<usize>] {
        &self.embeddings
    }

    pub fn len(&self) -> usize {
        self.embeddings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embeddings.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec<usize>> {
        self.embeddings.iter()
    }

    pub fn contains(&self, subset: &[usize]) -> bool {
        self.embeddings.binary_search_by(|e| e.as_slice().cmp(subset)).is_ok()
    }
}

/// Lists every vertex subset of `host` whose induced subgraph contains a copy
/// of `pattern`, in lexicographic order. Subsets are sorted label lists.
pub fn enumerate_embeddings(host: &Graph, pattern: &Graph) -> Result<EmbeddingSet> {
    if host.vertex_count() > MAX_EMBEDDING_VERTICES {
        return Err(Error::SizeLimit {
            what: "host vertex count for embedding enumeration",
            limit: MAX_EMBEDDING_VERTICES as u64,
            actual: host.vertex_count() as u64,
        });
    }
    let mut embeddings = Vec::new();
    let size = pattern.vertex_count();
    if size <= host.vertex_count() {
        let mut subset = Vec::with_capacity(size);
        collect_subsets(host, pattern, 1, size, &mut subset, &mut embeddings);
    }
    Ok(EmbeddingSet { embeddings })
}

fn collect_subsets(
    host: &Graph,
    pattern: &Graph,
    from: usize,
    size: usize,
    subset: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if subset.len() == size {
        if host.contains_copy_on(pattern, subset) {
            out.push(subset.clone());
        }
        return;
    }
    let needed = size - subset.len();
    for v in from..=host.vertex_count() + 1 - needed {
        subset.push(v);
        collect_subsets(host, pattern, v + 1, size, subset, out);
        subset.pop();
    }
}

/// Repeatedly merges classes of non-adjacent vertices with identical
/// neighborhoods into one vertex carrying the summed capacity, until no two
/// vertices are twins. Preserves the K2 capacity of the instance.
///
/// Merged vertices are relabeled `1..` in order of their smallest member.
pub fn merge_twin_vertices<T: Capacity>(graph: &Graph, b: &[T]) -> Result<(Graph, Vec<T>)> {
    if b.len() != graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: graph.vertex_count(),
            actual: b.len(),
        });
    }
    let mut graph = graph.clone();
    let mut caps = b.to_vec();
    loop {
        let mut classes: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
        for v in graph.vertices() {
            classes.entry(graph.neighbors(v)).or_default().push(v);
        }
        if classes.len() == graph.vertex_count() {
            return Ok((graph, caps));
        }
        let mut groups: Vec<Vec<usize>> = classes.into_values().collect();
        groups.sort_unstable_by_key(|g| g[0]);
        let mut class_of = vec![0usize; graph.vertex_count() + 1];
        let mut merged_caps = Vec::with_capacity(groups.len());
        for (i, group) in groups.iter().enumerate() {
            for &v in group {
                class_of[v] = i + 1;
            }
            merged_caps.push(scalar::sum(group.iter().map(|&v| caps[v - 1]))?);
        }
        let edges: BTreeSet<(usize, usize)> = graph
            .edges()
            .map(|(a, b)| {
                let (x, y) = (class_of[a], class_of[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        let name = if graph.name().ends_with("/merged") {
            graph.name().to_string()
        } else {
            format!("{}/merged", graph.name())
        };
        graph = Graph::new(name, groups.len(), edges)?;
        caps = merged_caps;
    }
}
