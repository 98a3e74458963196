//! Exact reference solver.
//!
//! Solves the integer program
//!
//! ```text
//! maximize   sum_p x_p
//! subject to sum_{p : i in p} x_p <= b_i   for every host vertex i
//!            x_p >= 0 integer             for every embedding p
//! ```
//!
//! by depth-first search over the embedding multiplicities `x_p`, in the
//! order produced by [`enumerate_embeddings`]. It is slow on purpose and only
//! accepts desk-sized instances.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::{self, Capacity};
use crate::topology::{enumerate_embeddings, EmbeddingSet, Graph};

pub const MAX_ORACLE_VERTICES: usize = 8;
pub const MAX_ORACLE_TOTAL: u64 = 200;
/// Largest total capacity [`expand_to_simple_matching`] accepts.
pub const MAX_EXPANSION_TOTAL: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    pub count: u64,
    /// `(index into embeddings, times used)` for every embedding used at least once.
    pub multiplicities: Vec<(usize, u64)>,
    pub embeddings: EmbeddingSet,
}

impl OracleSolution {
    /// The solution as an explicit list of matches.
    pub fn matches(&self) -> Vec<Vec<usize>> {
        let all = self.embeddings.as_slice();
        self.multiplicities
            .iter()
            .flat_map(|&(p, times)| std::iter::repeat_n(all[p].clone(), times as usize))
            .collect()
    }
}

struct Instance {
    embeddings: EmbeddingSet,
    masks: Vec<u16>,
    /// Union of the masks of embeddings `p..`.
    covered_from: Vec<u16>,
    /// Minimal half-integral fractional covers of embeddings `p..`, in
    /// halves: every remaining embedding has weight at least 2.
    covers: Arc<Vec<Vec<Residual>>>,
    guest_size: u64,
    caps: [u8; MAX_ORACLE_VERTICES],
}

fn is_cover(y: &Residual, masks: &[u16]) -> bool {
    masks
        .iter()
        .all(|&m| Instance::vertices(m).map(|v| y[v]).sum::<u8>() >= 2)
}

fn minimal_covers(vertex_count: usize, masks: &[u16]) -> Vec<Residual> {
    let total = 3usize.pow(vertex_count as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut y = [0u8; MAX_ORACLE_VERTICES];
        let mut c = code;
        for slot in y.iter_mut().take(vertex_count) {
            *slot = (c % 3) as u8;
            c /= 3;
        }
        if !is_cover(&y, masks) {
            continue;
        }
        let minimal = (0..vertex_count).filter(|&v| y[v] > 0).all(|v| {
            let mut smaller = y;
            smaller[v] -= 1;
            !is_cover(&smaller, masks)
        });
        if minimal {
            out.push(y);
        }
    }
    out
}

/// Covers depend only on the embedding masks, so they are shared across
/// calls on the same topology pair.
type CoverCache = HashMap<(usize, Vec<u16>), Arc<Vec<Vec<Residual>>>>;

fn suffix_covers(vertex_count: usize, masks: &[u16]) -> Arc<Vec<Vec<Residual>>> {
    static CACHE: OnceLock<Mutex<CoverCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (vertex_count, masks.to_vec());
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let covers: Vec<Vec<Residual>> = (0..=masks.len())
        .map(|p| minimal_covers(vertex_count, &masks[p..]))
        .collect();
    let covers = Arc::new(covers);
    cache.lock().unwrap().insert(key, covers.clone());
    covers
}

fn prepare<T: Capacity>(host: &Graph, guest: &Graph, b: &[T]) -> Result<Instance> {
    if host.vertex_count() > MAX_ORACLE_VERTICES {
        return Err(Error::SizeLimit {
            what: "oracle host vertex count",
            limit: MAX_ORACLE_VERTICES as u64,
            actual: host.vertex_count() as u64,
        });
    }
    if !guest.is_connected() {
        return Err(Error::UnsupportedVnuma(guest.name().to_string()));
    }
    if b.len() != host.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: host.vertex_count(),
            actual: b.len(),
        });
    }
    let wide: Vec<u64> = b.iter().map(|&v| scalar::to_u64(v)).collect::<Result<_>>()?;
    let total = wide.iter().try_fold(0u64, |acc, &v| acc.checked_add(v)).ok_or(Error::Overflow)?;
    if total > MAX_ORACLE_TOTAL {
        return Err(Error::SizeLimit {
            what: "oracle total capacity",
            limit: MAX_ORACLE_TOTAL,
            actual: total,
        });
    }
    let mut caps = [0u8; MAX_ORACLE_VERTICES];
    for (slot, &v) in caps.iter_mut().zip(&wide) {
        *slot = v as u8;
    }
    let embeddings = enumerate_embeddings(host, guest)?;
    let masks: Vec<u16> = embeddings
        .iter()
        .map(|e| e.iter().fold(0u16, |m, &v| m | 1 << (v - 1)))
        .collect();
    let mut covered_from = vec![0u16; masks.len() + 1];
    for p in (0..masks.len()).rev() {
        covered_from[p] = covered_from[p + 1] | masks[p];
    }
    let covers = suffix_covers(host.vertex_count(), &masks);
    Ok(Instance {
        embeddings,
        masks,
        covered_from,
        covers,
        guest_size: guest.vertex_count() as u64,
        caps,
    })
}

type Residual = [u8; MAX_ORACLE_VERTICES];

impl Instance {
    fn vertices(mask: u16) -> impl Iterator<Item = usize> {
        (0..MAX_ORACLE_VERTICES).filter(move |v| mask >> v & 1 == 1)
    }

    /// Every remaining embedding consumes `guest_size` units from vertices
    /// some remaining embedding covers, and at least one unit of weight from
    /// every fractional cover.
    fn bound(&self, p: usize, residual: &Residual) -> u64 {
        let mass: u64 = Self::vertices(self.covered_from[p])
            .map(|v| u64::from(residual[v]))
            .sum();
        self.covers[p]
            .iter()
            .map(|y| y.iter().zip(residual).map(|(&w, &r)| u64::from(w) * u64::from(r)).sum::<u64>() / 2)
            .fold(mass / self.guest_size, u64::min)
    }

    fn headroom(&self, p: usize, residual: &Residual) -> u8 {
        Self::vertices(self.masks[p]).map(|v| residual[v]).min().unwrap_or(0)
    }

    fn take(&self, p: usize, residual: &Residual, times: u8) -> Residual {
        let mut next = *residual;
        for v in Self::vertices(self.masks[p]) {
            next[v] -= times;
        }
        next
    }

    fn key(p: usize, residual: &Residual) -> u128 {
        (p as u128) << 64 | u128::from(u64::from_le_bytes(*residual))
    }

    /// Best count using embeddings `p..` within `residual`.
    fn solve(&self, p: usize, residual: &Residual, memo: &mut Option<HashMap<u128, u64>>) -> u64 {
        if p == self.masks.len() {
            return 0;
        }
        let bound = self.bound(p, residual);
        if bound == 0 {
            return 0;
        }
        if let Some(table) = memo.as_ref() {
            if let Some(&hit) = table.get(&Self::key(p, residual)) {
                return hit;
            }
        }
        let mut best = 0;
        for times in (0..=self.headroom(p, residual)).rev() {
            let next = self.take(p, residual, times);
            // A child that cannot beat `best` leaves the exact value unchanged.
            if u64::from(times) + self.bound(p + 1, &next) <= best {
                continue;
            }
            best = best.max(u64::from(times) + self.solve(p + 1, &next, memo));
            if best == bound {
                break;
            }
        }
        if let Some(table) = memo.as_mut() {
            table.insert(Self::key(p, residual), best);
        }
        best
    }
}

/// Exact capacity with a witnessing multiplicity vector.
pub fn oracle_vmcap<T: Capacity>(host: &Graph, guest: &Graph, b: &[T]) -> Result<OracleSolution> {
    let instance = prepare(host, guest, b)?;
    let mut memo = Some(HashMap::new());
    let count = instance.solve(0, &instance.caps, &mut memo);

    let mut multiplicities = Vec::new();
    let mut residual = instance.caps;
    let mut remaining = count;
    for p in 0..instance.masks.len() {
        if remaining == 0 {
            break;
        }
        for times in (0..=instance.headroom(p, &residual)).rev() {
            let next = instance.take(p, &residual, times);
            if u64::from(times) + instance.solve(p + 1, &next, &mut memo) == remaining {
                if times > 0 {
                    multiplicities.push((p, u64::from(times)));
                }
                residual = next;
                remaining -= u64::from(times);
                break;
            }
        }
    }
    debug_assert_eq!(remaining, 0);
    Ok(OracleSolution {
        count,
        multiplicities,
        embeddings: instance.embeddings,
    })
}

/// Same search without the memo table.
pub fn oracle_vmcap_unmemoized<T: Capacity>(host: &Graph, guest: &Graph, b: &[T]) -> Result<u64> {
    let instance = prepare(host, guest, b)?;
    Ok(instance.solve(0, &instance.caps, &mut None))
}

/// Replaces every vertex `i` by `b_i` uncapacitated copies, joining copies of
/// adjacent vertices. Copies of vertex 1 come first. Returns `None` when all
/// capacities are zero.
pub fn expand_to_simple_matching<T: Capacity>(host: &Graph, b: &[T]) -> Result<Option<Graph>> {
    if b.len() != host.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: host.vertex_count(),
            actual: b.len(),
        });
    }
    let wide: Vec<u64> = b.iter().map(|&v| scalar::to_u64(v)).collect::<Result<_>>()?;
    let total: u64 = wide.iter().sum();
    if total > MAX_EXPANSION_TOTAL {
        return Err(Error::SizeLimit {
            what: "total capacity for the uncapacitated expansion",
            limit: MAX_EXPANSION_TOTAL,
            actual: total,
        });
    }
    if total == 0 {
        return Ok(None);
    }
    let mut first = vec![1usize; host.vertex_count() + 1];
    for v in 1..host.vertex_count() {
        first[v + 1] = first[v] + wide[v - 1] as usize;
    }
    let copies = |v: usize| first[v]..first[v] + wide[v - 1] as usize;
    let mut edges = Vec::new();
    for (a, c) in host.edges() {
        for x in copies(a) {
            edges.extend(copies(c).map(|y| (x, y)));
        }
    }
    Graph::new(format!("{}/expanded", host.name()), total as usize, edges).map(Some)
}

/// Maximum cardinality matching by exhaustive search. Graphs of up to 64
/// vertices are accepted, but the running time is exponential.
pub fn brute_force_matching(graph: &Graph) -> Result<usize> {
    let n = graph.vertex_count();
    if n > 64 {
        return Err(Error::SizeLimit {
            what: "vertex count for brute-force matching",
            limit: 64,
            actual: n as u64,
        });
    }
    let adjacency: Vec<u64> = graph
        .vertices()
        .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << (u - 1)))
        .collect();
    let free = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(matching_on(&adjacency, free))
}

fn matching_on(adjacency: &[u64], free: u64) -> usize {
    if free == 0 {
        return 0;
    }
    let v = free.trailing_zeros() as usize;
    let rest = free & !(1 << v);
    let mut best = matching_on(adjacency, rest);
    let mut partners = adjacency[v] & rest;
    while partners != 0 {
        let u = partners.trailing_zeros();
        best = best.max(1 + matching_on(adjacency, rest & !(1 << u)));
        partners &= partners - 1;
    }
    best
}
