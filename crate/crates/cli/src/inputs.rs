//! Cluster state and flavor documents.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use numacap::capacity::{Flavor, ServerState};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub servers: Vec<ServerState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlavorFile {
    pub flavors: Vec<Flavor>,
}

impl FlavorFile {
    pub fn find(&self, id: &str) -> Result<&Flavor> {
        self.flavors.iter().find(|f| f.id == id).ok_or_else(|| {
            let known: Vec<&str> = self.flavors.iter().map(|f| f.id.as_str()).collect();
            anyhow!("unknown flavor {id:?} (known: {})", known.join(", "))
        })
    }
}

/// Parses `text`, reporting the path of the offending field on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("at {path}: {}", e.into_inner())
    })
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("invalid {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_the_bad_field() {
        let err = parse::<StateFile>(
            r#"{"servers": [{"id": "a", "components": [{"topology": "c5", "capacities": [1, 1, 1, 1]}]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("servers[0].components[0]"), "{err}");

        let err = parse::<FlavorFile>(r#"{"flavors": [{"id": "x", "vnuma": "k2", "demand": {"cpu": 0}}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("flavors[0].demand"), "{err}");
    }

    #[test]
    fn documents_round_trip() {
        let state: StateFile = parse(
            r#"{"servers": [{"id": "a", "components": [{"topology": "k4", "nodes": [{"cpu": 4}, {"cpu": 4}, {"cpu": 4}, {"cpu": 4}]}]}]}"#,
        )
        .unwrap();
        let again: StateFile = parse(&serde_json::to_string(&state).unwrap()).unwrap();
        assert_eq!(again, state);

        let flavors: FlavorFile = parse(r#"{"flavors": [{"id": "x", "vnuma": "k2", "demand": {"cpu": 2}}]}"#).unwrap();
        let again: FlavorFile = parse(&serde_json::to_string(&flavors).unwrap()).unwrap();
        assert_eq!(again, flavors);
        assert!(flavors.find("x").is_ok());
        assert!(flavors.find("y").is_err());
    }
}
