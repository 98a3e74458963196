//! Capacity of multi-NUMA servers for multi-NUMA virtual machines.
//!
//! Given a server's pNUMA topology, a VM flavor's vNUMA topology and how
//! many vNUMA nodes each pNUMA node can still host, [`vmcap`] returns the
//! maximum number of additional VMs in constant time for every common
//! topology pair. [`placement`] builds matching witnesses, [`capacity`]
//! derives per-node capacities from free resources and aggregates a cluster,
//! and [`oracle`] is the exhaustive solver the closed forms are checked
//! against.
//!
//! All arithmetic is integer. Evaluators are generic over the unsigned
//! capacity type (see [`Capacity`]); the aliases below fix it to `u64`.

pub mod capacity;
pub mod error;
pub mod formulas;
pub mod oracle;
pub mod placement;
pub mod scalar;
pub mod topology;

pub use error::{Error, Result};
pub use formulas::{vmcap, Method, VmcapResult};
pub use placement::{place, Placement};
pub use scalar::{Capacity, MAX_CAPACITY};
pub use topology::{expand_topology, enumerate_embeddings, Graph, TopologyId};

/// Capacity scalar used by the CLI and the resource model.
pub type Count = u64;
/// Capacity vector over [`Count`].
pub type CapacityVector = scalar::CapacityVector<Count>;
/// Exact partial mean over [`Count`].
pub type PartialMean = num_rational::Ratio<Count>;
/// Capacity result over [`Count`].
pub type Vmcap = VmcapResult<Count>;
