//! JSON document format for fibre configurations.
//!
//! ```json
//! {
//!   "components": [{"id": "f0", "self_int": -1, "mult": 1, "d_deg": 1}, ...],
//!   "edges": [["f0", "e1", 1]],
//!   "d_self": 8
//! }
//! ```
//!
//! Component order is kept as written. Edges are emitted once per pair in
//! component order. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use super::{ComponentId, ComponentRecord, ConfigError, FiberConfig};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    id: String,
    self_int: i64,
    mult: i64,
    d_deg: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ConfigDocument {
    components: Vec<ComponentDoc>,
    #[serde(default)]
    edges: Vec<(String, String, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d_self: Option<i64>,
}

impl ConfigDocument {
    pub(crate) fn from_config(config: &FiberConfig) -> Self {
        let components = config
            .components()
            .iter()
            .map(|c| ComponentDoc {
                id: c.id.to_string(),
                self_int: c.self_int,
                mult: i64::from(c.mult),
                d_deg: c.d_deg,
            })
            .collect();
        let edges = config
            .edges()
            .map(|(i, j, k)| {
                (
                    config.component(i).id.to_string(),
                    config.component(j).id.to_string(),
                    i64::from(k),
                )
            })
            .collect();
        Self {
            components,
            edges,
            d_self: config.d_self(),
        }
    }

    /// Structural checks and invariant validation.
    pub(crate) fn into_config(self) -> Result<FiberConfig, ConfigError> {
        let mut records = Vec::with_capacity(self.components.len());
        for c in self.components {
            let mult = u32::try_from(c.mult)
                .ok()
                .filter(|&m| m >= 1)
                .ok_or_else(|| ConfigError::BadMultiplicity {
                    id: ComponentId::new(c.id.clone()),
                    value: c.mult,
                })?;
            records.push(ComponentRecord::new(c.id, c.self_int, mult, c.d_deg));
        }
        let edges = self
            .edges
            .into_iter()
            .map(|(a, b, k)| (ComponentId::new(a), ComponentId::new(b), k));
        let config = FiberConfig::from_raw_edges(records, edges, self.d_self)?;
        let report = config.validate();
        if !report.is_valid() {
            return Err(ConfigError::Invariant(report));
        }
        Ok(config)
    }
}

/// Pretty-printed JSON, terminated by a newline.
pub fn serialize(config: &FiberConfig) -> String {
    let mut text = serde_json::to_string_pretty(&ConfigDocument::from_config(config))
        .expect("config documents always serialise");
    text.push('\n');
    text
}

/// Parses and validates a configuration document.
pub fn parse(text: &str) -> Result<FiberConfig, ConfigError> {
    let doc: ConfigDocument =
        serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    doc.into_config()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{canonical_form, InvariantViolation};

    const F2_D: &str = r#"{
        "components": [
            {"id": "f0", "self_int": -2, "mult": 1, "d_deg": 0},
            {"id": "e1", "self_int": -2, "mult": 1, "d_deg": 0},
            {"id": "e2", "self_int": -1, "mult": 2, "d_deg": 1}
        ],
        "edges": [["f0", "e2", 1], ["e1", "e2", 1]]
    }"#;

    #[test]
    fn round_trip_f2_d() {
        let c = parse(F2_D).unwrap();
        let again = parse(&serialize(&c)).unwrap();
        assert_eq!(c, again);
        assert_eq!(canonical_form(&c), canonical_form(&again));
    }

    #[test]
    fn d_self_round_trips() {
        let c = FiberConfig::smooth(Some(8));
        let text = serialize(&c);
        assert!(text.contains("\"d_self\": 8"));
        assert_eq!(parse(&text).unwrap().d_self(), Some(8));
        assert!(!serialize(&FiberConfig::smooth(None)).contains("d_self"));
    }

    #[test]
    fn self_loop_is_rejected() {
        let text = r#"{"components": [{"id": "f0", "self_int": 0, "mult": 1, "d_deg": 2}],
                      "edges": [["f0", "f0", 1]]}"#;
        assert!(matches!(parse(text), Err(ConfigError::SelfLoop(_))));
    }

    #[test]
    fn unbalanced_degree_is_an_invariant_error() {
        let text = r#"{"components": [{"id": "f0", "self_int": 0, "mult": 1, "d_deg": 3}]}"#;
        match parse(text) {
            Err(ConfigError::Invariant(report)) => {
                assert_eq!(
                    report.violations,
                    vec![InvariantViolation::BisecantBalance { sum: 3 }]
                );
                assert!(report.to_string().contains("bisecant balance"));
            }
            other => panic!("expected invariant error, got {other:?}"),
        }
    }

    #[test]
    fn error_classes_are_distinct() {
        assert!(matches!(parse("{"), Err(ConfigError::Syntax(_))));
        let unknown_field =
            r#"{"components": [{"id": "f0", "self_int": 0, "mult": 1, "d_deg": 2, "x": 1}]}"#;
        assert!(matches!(parse(unknown_field), Err(ConfigError::Syntax(_))));
        let dup = r#"{"components": [{"id": "a", "self_int": 0, "mult": 1, "d_deg": 2},
                                     {"id": "a", "self_int": 0, "mult": 1, "d_deg": 2}]}"#;
        assert!(matches!(parse(dup), Err(ConfigError::DuplicateId(_))));
        let neg = r#"{"components": [{"id": "a", "self_int": -1, "mult": 1, "d_deg": 1},
                                     {"id": "b", "self_int": -1, "mult": 1, "d_deg": 1}],
                      "edges": [["a", "b", -1]]}"#;
        assert!(matches!(
            parse(neg),
            Err(ConfigError::NonPositiveIntersection { value: -1, .. })
        ));
        let asym = r#"{"components": [{"id": "a", "self_int": -1, "mult": 1, "d_deg": 1},
                                      {"id": "b", "self_int": -1, "mult": 1, "d_deg": 1}],
                       "edges": [["a", "b", 1], ["b", "a", 2]]}"#;
        assert!(matches!(
            parse(asym),
            Err(ConfigError::AsymmetricEdge { .. })
        ));
        let mult = r#"{"components": [{"id": "a", "self_int": 0, "mult": 0, "d_deg": 2}]}"#;
        assert!(matches!(
            parse(mult),
            Err(ConfigError::BadMultiplicity { .. })
        ));
    }
}
