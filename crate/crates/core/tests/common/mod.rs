#![allow(dead_code)]

use numacap::oracle::oracle_vmcap;
use numacap::{expand_topology, Graph, TopologyId};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every vector in `[0..=max]^len`, in lexicographic order.
pub fn grid(len: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; len];
    loop {
        out.push(current.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < max {
                current[i] += 1;
                break;
            }
            current[i] = 0;
        }
    }
}

/// Every vector of length `len` with entry sum at most `total`.
pub fn bounded_sum(len: usize, total: u64) -> Vec<Vec<u64>> {
    fn fill(prefix: &mut Vec<u64>, len: usize, left: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            fill(prefix, len, left - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(len), len, total, &mut out);
    out
}

pub fn random_vectors(rng: &mut ChaCha8Rng, count: usize, len: usize, max: u64) -> Vec<Vec<u64>> {
    (0..count)
        .map(|_| (0..len).map(|_| rng.gen_range(0..=max)).collect())
        .collect()
}

pub fn graph(id: TopologyId) -> Graph {
    expand_topology(id).unwrap()
}

pub fn oracle(host: TopologyId, guest: TopologyId, b: &[u64]) -> u64 {
    oracle_vmcap(&graph(host), &graph(guest), b).unwrap().count
}

/// Counts vertex subsets of `host` carrying a copy of `pattern` by trying
/// every ordered selection of distinct host vertices as the image of the
/// pattern's labels.
pub fn count_embeddings_by_permutation(host: &Graph, pattern: &Graph) -> usize {
    let n = host.vertex_count();
    let k = pattern.vertex_count();
    let pattern_edges: Vec<(usize, usize)> = pattern.edges().collect();
    let mut found = std::collections::BTreeSet::new();
    let mut image = Vec::with_capacity(k);
    fn walk(
        host: &Graph,
        n: usize,
        k: usize,
        edges: &[(usize, usize)],
        image: &mut Vec<usize>,
        found: &mut std::collections::BTreeSet<Vec<usize>>,
    ) {
        if image.len() == k {
            if edges.iter().all(|&(a, b)| host.has_edge(image[a - 1], image[b - 1])) {
                let mut subset = image.clone();
                subset.sort_unstable();
                found.insert(subset);
            }
            return;
        }
        for v in 1..=n {
            if !image.contains(&v) {
                image.push(v);
                walk(host, n, k, edges, image, found);
                image.pop();
            }
        }
    }
    walk(host, n, k, &pattern_edges, &mut image, &mut found);
    found.len()
}

/// `K2` into `CQ3` with `x` matches on (1,7) and `y` on (2,8), the ladder
/// part evaluated with its normalized-end bound, before any algebraic
/// simplification.
pub fn cq3_with_cross_edges(b: &[u64], x: u64, y: u64) -> u64 {
    let b = |i: usize| b[i - 1] as i64;
    let (x, y) = (x as i64, y as i64);
    let first = (b(1) - x).min(b(2) + b(4) - y) + b(3) + b(5) + (b(7) - x).min(b(6) + b(8) - y);
    let second = (b(2) - y).min(b(1) + b(3) - x) + b(4) + b(6) + (b(8) - y).min(b(5) + b(7) - x);
    (x + y + first.min(second)) as u64
}

/// Maximizes [`cq3_with_cross_edges`] over every feasible `(x, y)`.
pub fn cq3_by_cross_edge_search(b: &[u64]) -> u64 {
    let mut best = 0;
    for x in 0..=b[0].min(b[6]) {
        for y in 0..=b[1].min(b[7]) {
            best = best.max(cq3_with_cross_edges(b, x, y));
        }
    }
    best
}

/// Capacity by plain enumeration of multiplicities, no bounds and no memo.
/// Only usable on tiny instances.
pub fn naive_vmcap(host: &Graph, guest: &Graph, b: &[u64]) -> u64 {
    let embeddings = numacap::enumerate_embeddings(host, guest).unwrap();
    fn go(embeddings: &[Vec<usize>], residual: &mut [u64]) -> u64 {
        let Some((first, rest)) = embeddings.split_first() else {
            return 0;
        };
        let mut best = go(rest, residual);
        let mut used = 0;
        while first.iter().all(|&v| residual[v - 1] > 0) {
            for &v in first {
                residual[v - 1] -= 1;
            }
            used += 1;
            best = best.max(used + go(rest, residual));
        }
        for &v in first {
            residual[v - 1] += used;
        }
        best
    }
    go(embeddings.as_slice(), &mut b.to_vec())
}

/// Topology pairs with a closed form, by name.
pub const CLOSED_FORM_PAIRS: [(TopologyId, TopologyId); 13] = [
    (TopologyId::C4, TopologyId::K2),
    (TopologyId::K4, TopologyId::K2),
    (TopologyId::K4, TopologyId::K3),
    (TopologyId::L4, TopologyId::K2),
    (TopologyId::CQ3, TopologyId::K2),
    (TopologyId::CQ3, TopologyId::C4),
    (TopologyId::Q33, TopologyId::K2),
    (TopologyId::Q33, TopologyId::C4),
    (TopologyId::CompleteBipartite(2, 3), TopologyId::K2),
    (TopologyId::Star(4), TopologyId::K2),
    (TopologyId::Complete(5), TopologyId::K3),
    (TopologyId::Complete(6), TopologyId::Complete(4)),
    (TopologyId::K3, TopologyId::K2),
];
