//! Constant-time capacity evaluators.
//!
//! Every function takes capacities in canonical label order (`b[0]` is
//! vertex 1) for the labelings documented in [`crate::topology`].

mod bipartite;
mod complete;
mod crossed_cube;

pub use bipartite::{vmcap_c4_k2, vmcap_kmn_k2, vmcap_q33_c4, vmcap_q33_k2};
pub use complete::{partial_means, vmcap_k4_k2, vmcap_k4_k3, vmcap_kn_kk_min, vmcap_kn_kk_rec};
pub use crossed_cube::{
    cq3_cross_matches, vmcap_cq3_c4, vmcap_cq3_k2, vmcap_cq3_k2_rounded, vmcap_l4_k2, CrossMatches,
    DeltaRounding,
};
pub(crate) use crossed_cube::rung_minima;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle;
use crate::scalar::{self, Capacity};
use crate::topology::{Graph, TopologyId};

pub(crate) fn check_len<T>(b: &[T], expected: usize) -> Result<()> {
    if b.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: b.len(),
        });
    }
    Ok(())
}

/// Caps every vertex in `subset` by the total capacity of its neighbors, in
/// one simultaneous round over the original values. Afterwards every vertex
/// in `subset` is normalized and the capacity for any connected vNUMA graph
/// with at least two vertices is unchanged.
pub fn normalize_capacities<T: Capacity>(graph: &Graph, b: &[T], subset: &[usize]) -> Result<Vec<T>> {
    check_len(b, graph.vertex_count())?;
    let mut out = b.to_vec();
    for &v in subset {
        if !(1..=graph.vertex_count()).contains(&v) {
            return Err(Error::VertexOutOfRange(v));
        }
        let around = scalar::sum(graph.neighbors(v).iter().map(|&u| b[u - 1]))?;
        out[v - 1] = b[v - 1].min(around);
    }
    Ok(out)
}

/// Which evaluator produced a [`VmcapResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    C4K2,
    K4K2,
    K4K3,
    /// `K_k` into `K_n` for other orders.
    CompleteGraphs,
    BipartiteK2,
    L4K2,
    Cq3K2,
    Cq3C4,
    Q33K2,
    Q33C4,
    /// The vNUMA graph has more vertices than the host.
    TooLarge,
    /// No closed form; computed by exhaustive search.
    Oracle,
}

impl Method {
    pub fn is_closed_form(self) -> bool {
        self != Method::Oracle
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VmcapResult<T> {
    pub count: T,
    pub method: Method,
}

/// Maximum number of copies of `vnuma` that fit simultaneously into `pnuma`
/// when vertex `i` may be used at most `b[i - 1]` times.
///
/// Known pairs go to their closed form; any other pair within the oracle's
/// size limits is solved exactly and flagged [`Method::Oracle`].
pub fn vmcap<T: Capacity>(pnuma: TopologyId, vnuma: TopologyId, b: &[T]) -> Result<VmcapResult<T>> {
    let method = select_method(pnuma, vnuma, b)?;
    let count = evaluate(pnuma.canonical(), vnuma.canonical(), method, b)?;
    Ok(VmcapResult { count, method })
}

/// Resolves which evaluator [`vmcap`] uses, validating ids and dimensions.
pub fn select_method<T>(pnuma: TopologyId, vnuma: TopologyId, b: &[T]) -> Result<Method> {
    use TopologyId::*;
    let host = pnuma.validate()?.canonical();
    let guest = vnuma.validate()?.canonical();
    check_len(b, host.vertex_count())?;
    if guest.vertex_count() < 2 {
        return Err(Error::UnsupportedVnuma(guest.to_string()));
    }
    if guest.vertex_count() > host.vertex_count() {
        return Ok(Method::TooLarge);
    }
    let method = match (host, guest) {
        (C4, K2) => Method::C4K2,
        (K4, K2) => Method::K4K2,
        (K4, K3) => Method::K4K3,
        (L4, K2) => Method::L4K2,
        (CQ3, K2) => Method::Cq3K2,
        (CQ3, C4) => Method::Cq3C4,
        (Q33, K2) => Method::Q33K2,
        (Q33, C4) => Method::Q33C4,
        (h, K2) if h.bipartite_parts().is_some() => Method::BipartiteK2,
        (h, g) if h.complete_order().is_some() && g.complete_order().is_some() => {
            Method::CompleteGraphs
        }
        _ => Method::Oracle,
    };
    Ok(method)
}

fn evaluate<T: Capacity>(host: TopologyId, guest: TopologyId, method: Method, b: &[T]) -> Result<T> {
    match method {
        Method::C4K2 => vmcap_c4_k2(b),
        Method::K4K2 => vmcap_k4_k2(b),
        Method::K4K3 => vmcap_k4_k3(b),
        Method::L4K2 => vmcap_l4_k2(b),
        Method::Cq3K2 => vmcap_cq3_k2(b),
        Method::Cq3C4 => vmcap_cq3_c4(b),
        Method::Q33K2 => vmcap_q33_k2(b),
        Method::Q33C4 => vmcap_q33_c4(b),
        Method::BipartiteK2 => {
            let (m, n) = host.bipartite_parts().expect("checked by select_method");
            vmcap_kmn_k2(m, n, b)
        }
        Method::CompleteGraphs => {
            let n = host.complete_order().expect("checked by select_method");
            let k = guest.complete_order().expect("checked by select_method");
            vmcap_kn_kk_rec(n, k, b)
        }
        Method::TooLarge => Ok(T::zero()),
        Method::Oracle => {
            let solution = oracle::oracle_vmcap(&host.expand()?, &guest.expand()?, b)?;
            T::from(solution.count).ok_or(Error::Overflow)
        }
    }
}
