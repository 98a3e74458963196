//! Explicit placements that attain the closed-form capacities.
//!
//! A placement is a list of matches; each match is the sorted vertex subset
//! of the host that one VM occupies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{self, cq3_cross_matches, rung_minima, DeltaRounding, Method};
use crate::oracle;
use crate::scalar::{self, Capacity};
use crate::topology::{enumerate_embeddings, Graph, TopologyId};

/// Upper limit on the number of matches a placement may list.
pub const MAX_PLACEMENT_MATCHES: u64 = 10_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Placement {
    pub matches: Vec<Vec<usize>>,
}

impl Placement {
    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }

    fn push_times(&mut self, mut labels: Vec<usize>, times: usize) {
        labels.sort_unstable();
        self.matches.extend(std::iter::repeat_n(labels, times));
    }

    /// How many matches use each vertex, indexed by label - 1.
    pub fn usage(&self, vertex_count: usize) -> Vec<u64> {
        let mut used = vec![0u64; vertex_count];
        for m in &self.matches {
            for &v in m {
                if let Some(slot) = v.checked_sub(1).and_then(|i| used.get_mut(i)) {
                    *slot += 1;
                }
            }
        }
        used
    }

    /// Checks that every match is an embedding of `guest` and that no vertex
    /// is used more than its capacity. Returns a description of the first
    /// violation.
    pub fn validate<T: Capacity>(&self, host: &Graph, guest: &Graph, b: &[T]) -> std::result::Result<(), String> {
        let embeddings = enumerate_embeddings(host, guest).map_err(|e| e.to_string())?;
        if let Some(bad) = self.matches.iter().find(|m| !embeddings.contains(m)) {
            return Err(format!("{bad:?} is not an embedding of {} in {}", guest.name(), host.name()));
        }
        for (i, (&used, &cap)) in self.usage(host.vertex_count()).iter().zip(b).enumerate() {
            let cap = cap.to_u64().unwrap_or(u64::MAX);
            if used > cap {
                return Err(format!("vertex {} used {used} times, capacity {cap}", i + 1));
            }
        }
        Ok(())
    }
}

fn ensure_listable<T: Capacity>(b: &[T], guest_size: usize) -> Result<()> {
    let total = scalar::to_u64(scalar::sum(b.iter().copied())?)?;
    let bound = total / guest_size as u64;
    if bound > MAX_PLACEMENT_MATCHES {
        return Err(Error::SizeLimit {
            what: "placement size bound",
            limit: MAX_PLACEMENT_MATCHES,
            actual: bound,
        });
    }
    Ok(())
}

fn count<T: Capacity>(v: T) -> usize {
    // Bounded by ensure_listable.
    v.to_usize().expect("placement size checked")
}

/// Result of the greedy complete-graph construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub placement: Placement,
    /// Number of passes through the outer loop that produced matches.
    pub iterations: usize,
}

/// `K_k` into `K_n`: repeatedly match the k vertices with the largest
/// remaining capacity. Each pass emits a batch of identical matches that
/// lasts until the k-th vertex drops below the (k+1)-th. Ties are broken by
/// ascending label.
pub fn place_kn_kk<T: Capacity>(n: usize, k: usize, b: &[T]) -> Result<Placement> {
    greedy_complete(n, k, b, true).map(|t| t.placement)
}

/// The greedy construction with or without batching.
pub fn greedy_complete<T: Capacity>(n: usize, k: usize, b: &[T], batched: bool) -> Result<GreedyTrace> {
    if k == 0 || k > n {
        return Err(Error::InvalidArity { n, k });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: b.len() });
    }
    ensure_listable(b, k)?;
    let mut caps = b.to_vec();
    let mut placement = Placement::default();
    let mut iterations = 0;
    loop {
        let mut live: Vec<usize> = (0..n).filter(|&i| caps[i] > T::zero()).collect();
        if live.len() < k {
            return Ok(GreedyTrace { placement, iterations });
        }
        // Stable sort keeps equal capacities in label order.
        live.sort_by(|&i, &j| caps[j].cmp(&caps[i]));
        let batch = if !batched {
            T::one()
        } else if live.len() > k {
            caps[live[k - 1]] - caps[live[k]] + T::one()
        } else {
            caps[live[k - 1]]
        };
        placement.push_times(live[..k].iter().map(|&i| i + 1).collect(), count(batch));
        for &i in &live[..k] {
            caps[i] = caps[i] - batch;
        }
        iterations += 1;
    }
}

/// Pairs two complete-bipartite parts: the largest remaining vertex of one
/// part is matched with the largest of the other until a part runs dry.
fn pair_parts<T: Capacity>(placement: &mut Placement, caps: &mut [T], left: &[usize], right: &[usize]) {
    let largest = |caps: &[T], part: &[usize]| {
        part.iter()
            .copied()
            .filter(|&v| caps[v - 1] > T::zero())
            .min_by(|&a, &b| caps[b - 1].cmp(&caps[a - 1]).then(a.cmp(&b)))
    };
    while let (Some(a), Some(b)) = (largest(caps, left), largest(caps, right)) {
        let times = caps[a - 1].min(caps[b - 1]);
        placement.push_times(vec![a, b], count(times));
        caps[a - 1] = caps[a - 1] - times;
        caps[b - 1] = caps[b - 1] - times;
    }
}

fn pair_edge<T: Capacity>(placement: &mut Placement, caps: &mut [T], a: usize, b: usize, times: T) {
    placement.push_times(vec![a, b], count(times));
    caps[a - 1] = caps[a - 1] - times;
    caps[b - 1] = caps[b - 1] - times;
}

/// Drains one end rung of the ladder: `(end_a, end_b)` is the rung and
/// `inner_a`, `inner_b` are the other neighbors of each end.
fn drain_rung<T: Capacity>(
    placement: &mut Placement,
    caps: &mut [T],
    (end_a, inner_a): (usize, usize),
    (end_b, inner_b): (usize, usize),
) -> Result<()> {
    let c = |v: usize| caps[v - 1];
    let mut na = c(end_a).min(scalar::add(c(end_b), c(inner_a))?);
    let mut nb = c(end_b).min(scalar::add(c(end_a), c(inner_b))?);
    let both = na.min(nb);
    pair_edge(placement, caps, end_a, end_b, both);
    na = na - both;
    nb = nb - both;
    // Normalization guarantees the inner neighbor can absorb the rest.
    pair_edge(placement, caps, end_a, inner_a, na);
    pair_edge(placement, caps, end_b, inner_b, nb);
    Ok(())
}

fn place_ladder<T: Capacity>(placement: &mut Placement, caps: &mut [T]) -> Result<()> {
    drain_rung(placement, caps, (1, 4), (2, 3))?;
    drain_rung(placement, caps, (7, 6), (8, 5))?;
    pair_parts(placement, caps, &[3, 5], &[4, 6]);
    Ok(())
}

/// `K2` into a host with a known closed form, following the constructive
/// half of each proof.
pub fn place_k2<T: Capacity>(topology: TopologyId, b: &[T]) -> Result<Placement> {
    let host = topology.validate()?.canonical();
    formulas::check_len(b, host.vertex_count())?;
    ensure_listable(b, 2)?;
    let mut caps = b.to_vec();
    let mut placement = Placement::default();
    match host {
        TopologyId::C4 => pair_parts(&mut placement, &mut caps, &[1, 3], &[2, 4]),
        TopologyId::Q33 => pair_parts(&mut placement, &mut caps, &[1, 3, 5, 7], &[2, 4, 6, 8]),
        TopologyId::L4 => place_ladder(&mut placement, &mut caps)?,
        TopologyId::CQ3 => {
            let cross = cq3_cross_matches(b, DeltaRounding::Floor)?;
            pair_edge(&mut placement, &mut caps, 1, 7, cross.x);
            pair_edge(&mut placement, &mut caps, 2, 8, cross.y);
            place_ladder(&mut placement, &mut caps)?;
        }
        h => {
            if let Some((m, n)) = h.bipartite_parts() {
                let left: Vec<usize> = (1..=m).collect();
                let right: Vec<usize> = (m + 1..=m + n).collect();
                pair_parts(&mut placement, &mut caps, &left, &right);
            } else if let Some(n) = h.complete_order() {
                return place_kn_kk(n, 2, b);
            } else {
                return Err(Error::UnsupportedPair {
                    pnuma: h.to_string(),
                    vnuma: TopologyId::K2.to_string(),
                });
            }
        }
    }
    Ok(placement)
}

/// `C4` into `CQ3` or `Q33`.
pub fn place_c4_vnuma<T: Capacity>(topology: TopologyId, b: &[T]) -> Result<Placement> {
    let host = topology.validate()?.canonical();
    formulas::check_len(b, host.vertex_count())?;
    ensure_listable(b, 4)?;
    let mut placement = Placement::default();
    match host {
        TopologyId::CQ3 => {
            // Rung r of CQ3 is the pair (2r - 1, 2r); an edge between rungs
            // of the transformed cycle is the square on those two rungs.
            let rungs = place_k2(TopologyId::C4, &rung_minima(b))?;
            for m in rungs.matches {
                let labels = m.iter().flat_map(|&r| [2 * r - 1, 2 * r]).collect();
                placement.push_times(labels, 1);
            }
        }
        TopologyId::Q33 => {
            let odd = place_kn_kk(4, 2, &[b[0], b[2], b[4], b[6]])?;
            let even = place_kn_kk(4, 2, &[b[1], b[3], b[5], b[7]])?;
            for (o, e) in odd.matches.iter().zip(&even.matches) {
                let labels = o.iter().map(|&i| 2 * i - 1).chain(e.iter().map(|&i| 2 * i)).collect();
                placement.push_times(labels, 1);
            }
        }
        h => {
            return Err(Error::UnsupportedPair {
                pnuma: h.to_string(),
                vnuma: TopologyId::C4.to_string(),
            })
        }
    }
    Ok(placement)
}

/// A placement for any pair [`formulas::vmcap`] accepts. Pairs without a
/// constructive closed form use the oracle's witness.
pub fn place<T: Capacity>(pnuma: TopologyId, vnuma: TopologyId, b: &[T]) -> Result<Placement> {
    let method = formulas::select_method(pnuma, vnuma, b)?;
    let host = pnuma.canonical();
    let guest = vnuma.canonical();
    match method {
        Method::TooLarge => Ok(Placement::default()),
        Method::C4K2 | Method::L4K2 | Method::Cq3K2 | Method::Q33K2 | Method::BipartiteK2 => place_k2(host, b),
        Method::K4K2 | Method::K4K3 | Method::CompleteGraphs => {
            let n = host.complete_order().expect("complete host");
            let k = guest.complete_order().expect("complete guest");
            place_kn_kk(n, k, b)
        }
        Method::Cq3C4 | Method::Q33C4 => place_c4_vnuma(host, b),
        Method::Oracle => {
            let solution = oracle::oracle_vmcap(&host.expand()?, &guest.expand()?, b)?;
            Ok(Placement {
                matches: solution.matches(),
            })
        }
    }
}
