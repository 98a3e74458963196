//! From free resources to VM counts, per server and per cluster.
//!
//! A node's capacity is the number of vNUMA nodes of a flavor it can still
//! host: the minimum over the flavor's demanded resources of
//! `floor(free / demand)`. Resources the flavor does not demand are ignored.
//! Amounts are integers in whatever unit the caller picks (cores, MiB), as
//! long as free and demand agree.
//!
//! A server is a disjoint union of topology components, e.g. two sockets
//! that may not be spanned by one VM are two `k4` components.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas;
use crate::scalar::CapacityVector;
use crate::topology::TopologyId;
use crate::Count;

/// Amount demanded by a single vNUMA node, per resource. Every amount is
/// positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, u64>", into = "BTreeMap<String, u64>")]
pub struct ResourceDemand(BTreeMap<String, u64>);

impl ResourceDemand {
    pub fn new(amounts: BTreeMap<String, u64>) -> Result<Self> {
        if amounts.is_empty() {
            return Err(Error::EmptyDemand);
        }
        if let Some((name, _)) = amounts.iter().find(|(_, &v)| v == 0) {
            return Err(Error::ZeroDemand(name.clone()));
        }
        Ok(Self(amounts))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl TryFrom<BTreeMap<String, u64>> for ResourceDemand {
    type Error = Error;

    fn try_from(amounts: BTreeMap<String, u64>) -> Result<Self> {
        Self::new(amounts)
    }
}

impl From<ResourceDemand> for BTreeMap<String, u64> {
    fn from(d: ResourceDemand) -> Self {
        d.0
    }
}

/// Free amount per resource on one pNUMA node.
pub type NodeFree = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flavor {
    pub id: String,
    /// vNUMA shape; `k1` is a single-node VM.
    pub vnuma: TopologyId,
    pub demand: ResourceDemand,
}

/// How a component reports its nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentNodes {
    /// Free resources per node, in label order.
    Free(Vec<NodeFree>),
    /// Precomputed capacities per node, in label order. These are used as-is
    /// for every flavor.
    Capacities(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComponent", into = "RawComponent")]
pub struct Component {
    topology: TopologyId,
    nodes: ComponentNodes,
}

impl Component {
    pub fn new(topology: TopologyId, nodes: ComponentNodes) -> Result<Self> {
        let topology = topology.validate()?.canonical();
        let len = match &nodes {
            ComponentNodes::Free(v) => v.len(),
            ComponentNodes::Capacities(v) => v.len(),
        };
        if len != topology.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: topology.vertex_count(),
                actual: len,
            });
        }
        Ok(Self { topology, nodes })
    }

    pub fn topology(&self) -> TopologyId {
        self.topology
    }

    pub fn nodes(&self) -> &ComponentNodes {
        &self.nodes
    }

    /// Capacity vector of this component for `flavor`.
    pub fn capacities(&self, flavor: &Flavor) -> Result<CapacityVector<Count>> {
        let values = match &self.nodes {
            ComponentNodes::Capacities(v) => v.clone(),
            ComponentNodes::Free(nodes) => nodes
                .iter()
                .map(|free| node_capacity(free, &flavor.demand))
                .collect::<Result<_>>()?,
        };
        CapacityVector::new(values)
    }

    /// How many VMs of `flavor` fit into this component.
    pub fn capacity(&self, flavor: &Flavor) -> Result<Count> {
        let b = self.capacities(flavor)?;
        if flavor.vnuma.validate()?.vertex_count() == 1 {
            return b.total();
        }
        formulas::vmcap(self.topology, flavor.vnuma, &b).map(|r| r.count)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    topology: TopologyId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<NodeFree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacities: Option<Vec<u64>>,
}

impl TryFrom<RawComponent> for Component {
    type Error = Error;

    fn try_from(raw: RawComponent) -> Result<Self> {
        let nodes = match (raw.nodes, raw.capacities) {
            (Some(free), None) => ComponentNodes::Free(free),
            (None, Some(caps)) => ComponentNodes::Capacities(caps),
            _ => return Err(Error::AmbiguousComponent),
        };
        Component::new(raw.topology, nodes)
    }
}

impl From<Component> for RawComponent {
    fn from(c: Component) -> Self {
        let (nodes, capacities) = match c.nodes {
            ComponentNodes::Free(v) => (Some(v), None),
            ComponentNodes::Capacities(v) => (None, Some(v)),
        };
        RawComponent {
            topology: c.topology,
            nodes,
            capacities,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServerState {
    pub id: String,
    pub components: Vec<Component>,
}

/// `min over demanded resources of floor(free / demand)`.
pub fn node_capacity(free: &NodeFree, demand: &ResourceDemand) -> Result<Count> {
    let mut best = Count::MAX;
    for (name, amount) in demand.iter() {
        if amount == 0 {
            return Err(Error::ZeroDemand(name.to_string()));
        }
        let available = free
            .get(name)
            .ok_or_else(|| Error::MissingResource(name.to_string()))?;
        best = best.min(available / amount);
    }
    Ok(best)
}

/// Sum of the component capacities.
pub fn server_capacity(server: &ServerState, flavor: &Flavor) -> Result<Count> {
    server.components.iter().try_fold(0, |acc: Count, c| {
        acc.checked_add(c.capacity(flavor)?).ok_or(Error::Overflow)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerCapacity {
    pub id: String,
    pub capacity: Result<Count>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterCapacity {
    /// One entry per server, in input order.
    pub servers: Vec<ServerCapacity>,
    /// Sum over the servers that evaluated successfully.
    pub total: Count,
}

impl ClusterCapacity {
    pub fn failures(&self) -> impl Iterator<Item = &ServerCapacity> {
        self.servers.iter().filter(|s| s.capacity.is_err())
    }
}

/// Evaluates every server (in parallel) and sums the results. A failing
/// server is reported in its own entry and left out of the total.
pub fn cluster_capacity(servers: &[ServerState], flavor: &Flavor) -> ClusterCapacity {
    let servers: Vec<ServerCapacity> = servers
        .par_iter()
        .map(|s| ServerCapacity {
            id: s.id.clone(),
            capacity: server_capacity(s, flavor),
        })
        .collect();
    let total = servers
        .iter()
        .filter_map(|s| s.capacity.as_ref().ok())
        .fold(0 as Count, |acc, &c| acc.saturating_add(c));
    ClusterCapacity { servers, total }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demand(pairs: &[(&str, u64)]) -> ResourceDemand {
        ResourceDemand::new(pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()).unwrap()
    }

    fn free(pairs: &[(&str, u64)]) -> NodeFree {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    fn flavor(vnuma: TopologyId) -> Flavor {
        Flavor {
            id: "f".into(),
            vnuma,
            demand: demand(&[("cpu", 8), ("ram", 16)]),
        }
    }

    #[test]
    fn node_capacity_examples() {
        let d = demand(&[("cpu", 8), ("ram", 16)]);
        assert_eq!(node_capacity(&free(&[("cpu", 30), ("ram", 64)]), &d), Ok(3));
        assert_eq!(node_capacity(&free(&[("cpu", 0), ("ram", 64)]), &d), Ok(0));
        assert_eq!(node_capacity(&free(&[("cpu", 8), ("ram", 16)]), &d), Ok(1));
        assert_eq!(
            node_capacity(&free(&[("cpu", 8), ("ram", 16), ("l3", 1)]), &d),
            Ok(1)
        );
        assert_eq!(
            node_capacity(&free(&[("cpu", 8)]), &d),
            Err(Error::MissingResource("ram".into()))
        );
    }

    #[test]
    fn demand_must_be_positive() {
        assert_eq!(
            ResourceDemand::new(free(&[("cpu", 0)])),
            Err(Error::ZeroDemand("cpu".into()))
        );
        assert_eq!(ResourceDemand::new(BTreeMap::new()), Err(Error::EmptyDemand));
    }

    #[test]
    fn crossed_cube_server() {
        let nodes = vec![free(&[("cpu", 8), ("ram", 20)]); 8];
        let server = ServerState {
            id: "s".into(),
            components: vec![Component::new(TopologyId::CQ3, ComponentNodes::Free(nodes)).unwrap()],
        };
        assert_eq!(server_capacity(&server, &flavor(TopologyId::K2)), Ok(4));
        assert_eq!(server_capacity(&server, &flavor(TopologyId::Complete(1))), Ok(8));
    }

    #[test]
    fn component_length_is_checked() {
        assert_eq!(
            Component::new(TopologyId::C4, ComponentNodes::Capacities(vec![1, 2, 3])),
            Err(Error::DimensionMismatch { expected: 4, actual: 3 })
        );
    }

    #[test]
    fn empty_server_and_cluster() {
        let zero = ServerState {
            id: "z".into(),
            components: vec![Component::new(TopologyId::K4, ComponentNodes::Capacities(vec![0; 4])).unwrap()],
        };
        assert_eq!(server_capacity(&zero, &flavor(TopologyId::K2)), Ok(0));
        let report = cluster_capacity(&[], &flavor(TopologyId::K2));
        assert_eq!(report.total, 0);
        assert!(report.servers.is_empty());
    }

    #[test]
    fn failures_do_not_abort_the_batch() {
        let good = ServerState {
            id: "good".into(),
            components: vec![Component::new(TopologyId::C4, ComponentNodes::Capacities(vec![2, 5, 3, 1])).unwrap()],
        };
        let bad = ServerState {
            id: "bad".into(),
            components: vec![Component::new(
                TopologyId::K2,
                ComponentNodes::Free(vec![free(&[("cpu", 8)]), free(&[("cpu", 8)])]),
            )
            .unwrap()],
        };
        let report = cluster_capacity(&[good.clone(), bad, good], &flavor(TopologyId::K2));
        assert_eq!(report.total, 10);
        assert_eq!(report.servers[1].capacity, Err(Error::MissingResource("ram".into())));
        assert_eq!(report.failures().count(), 1);
        assert_eq!(
            report.servers.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(),
            ["good", "bad", "good"]
        );
    }

    #[test]
    fn component_json_forms() {
        let c: Component = serde_json::from_str(r#"{"topology":"c4","capacities":[1,2,3,4]}"#).unwrap();
        assert_eq!(c.topology(), TopologyId::C4);
        let back = serde_json::to_string(&c).unwrap();
        assert_eq!(back, r#"{"topology":"c4","capacities":[1,2,3,4]}"#);
        let both = r#"{"topology":"k2","capacities":[1,2],"nodes":[{},{}]}"#;
        assert!(serde_json::from_str::<Component>(both).is_err());
        let short = r#"{"topology":"k4","nodes":[{"cpu":1}]}"#;
        assert!(serde_json::from_str::<Component>(short).is_err());
    }
}
