//! Machine-readable output of every subcommand.

use numacap::{Method, Placement, TopologyId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceOutput {
    pub count: u64,
    pub matches: Placement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServerRow {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub flavor: String,
    pub servers: Vec<ServerRow>,
    pub total: u64,
}

impl ClusterReport {
    pub fn render(&self) -> String {
        let width = self.servers.iter().map(|s| s.id.len()).chain([6]).max().unwrap_or(6);
        let mut out = format!("flavor {}\n{:<width$}  capacity\n", self.flavor, "server");
        for row in &self.servers {
            match (&row.capacity, &row.error) {
                (Some(c), _) => out += &format!("{:<width$}  {c:>8}\n", row.id),
                (None, Some(e)) => out += &format!("{:<width$}  error: {e}\n", row.id),
                (None, None) => out += &format!("{:<width$}  -\n", row.id),
            }
        }
        out += &format!("{:<width$}  {:>8}\n", "total", self.total);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub caps: Vec<u64>,
    pub formula: u64,
    pub oracle: u64,
    /// Set when the placement, rather than the count, is at fault.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub topology: TopologyId,
    pub vnuma: TopologyId,
    pub method: Method,
    pub mode: SweepMode,
    pub max_cap: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: u64,
    pub mismatches: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn render(&self) -> String {
        let mut out = format!(
            "{}/{}: {} cases, {} mismatches\n",
            self.topology, self.vnuma, self.cases, self.mismatches
        );
        if let Some(c) = &self.first_counterexample {
            out += &format!(
                "first counterexample: caps={} formula={} oracle={}\n",
                join(&c.caps),
                c.formula,
                c.oracle
            );
            if let Some(p) = &c.placement {
                out += &format!("placement: {p}\n");
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub iterations: u64,
    pub seconds: f64,
    pub per_second: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub topology: TopologyId,
    pub vnuma: TopologyId,
    pub method: Method,
    pub closed_form: Throughput,
    /// Absent when the host is beyond the oracle's limits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Throughput>,
}

impl BenchReport {
    pub fn render(&self) -> String {
        let line = |name: &str, t: &Throughput| {
            format!(
                "{name:<8} {:>10} evaluations in {:.3} s ({:.0}/s)\n",
                t.iterations, t.seconds, t.per_second
            )
        };
        let method = serde_json::to_value(self.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let mut out = format!("{}/{} via {method}\n", self.topology, self.vnuma);
        out += &line("vmcap", &self.closed_form);
        match &self.oracle {
            Some(t) => out += &line("oracle", t),
            None => out += "oracle   skipped, instance too large\n",
        }
        out
    }
}

pub fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}
