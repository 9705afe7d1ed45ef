//! JSON file formats for graphs and points.
//!
//! A graph file reads
//! `{"vertices":[{"id","weight"}],"edges":[{"id","ends":[a,b]}],"leaves":[{"label","at"}]}`;
//! a point file wraps one as `{"graph":..,"coords":{"e1":"3/4","e2":"inf"}}`
//! with an optional `"mode":"closed"`. Emission is canonical: records in
//! stored order, lengths as reduced rationals, and the identified point
//! `0 ≡ ∞` written as `"0"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cone::{ConeMode, ExtendedPoint, Length};
use crate::error::Result;
use crate::graph::{GraphBuilder, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafRecord {
    pub label: u32,
    pub at: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub leaves: Vec<LeafRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRecord {
    Compactified,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub graph: GraphFile,
    pub coords: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeRecord>,
}

impl From<&WeightedGraph> for GraphFile {
    fn from(g: &WeightedGraph) -> Self {
        let id = |v: usize| g.vertices()[v].id.clone();
        GraphFile {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexRecord {
                    id: v.id.clone(),
                    weight: v.weight,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    ends: e.ends.map(id),
                })
                .collect(),
            leaves: g
                .leaves()
                .iter()
                .enumerate()
                .map(|(i, &v)| LeafRecord {
                    label: i as u32 + 1,
                    at: id(v),
                })
                .collect(),
        }
    }
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let mut b = GraphBuilder::new();
        for v in &self.vertices {
            b = b.vertex(&v.id, v.weight);
        }
        for e in &self.edges {
            b = b.edge(&e.id, &e.ends[0], &e.ends[1]);
        }
        for l in &self.leaves {
            b = b.leaf(l.label, &l.at);
        }
        b.build()
    }
}

impl From<&ExtendedPoint> for PointFile {
    fn from(p: &ExtendedPoint) -> Self {
        PointFile {
            graph: p.base().into(),
            coords: p.lengths().into_iter().map(|(e, x)| (e, x.to_string())).collect(),
            mode: (p.mode() == ConeMode::Closed).then_some(ModeRecord::Closed),
        }
    }
}

impl PointFile {
    pub fn to_point(&self) -> Result<ExtendedPoint> {
        let base = Arc::new(self.graph.to_graph()?);
        let lengths: BTreeMap<String, Length> = self
            .coords
            .iter()
            .map(|(e, x)| Ok((e.clone(), x.parse()?)))
            .collect::<Result<_>>()?;
        let mode = match self.mode {
            Some(ModeRecord::Closed) => ConeMode::Closed,
            _ => ConeMode::Compactified,
        };
        ExtendedPoint::from_lengths(base, &lengths, mode)
    }
}

pub fn parse_graph(json: &str) -> Result<WeightedGraph> {
    serde_json::from_str::<GraphFile>(json)?.to_graph()
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from(g)).expect("graph records serialize")
}

pub fn parse_point(json: &str) -> Result<ExtendedPoint> {
    serde_json::from_str::<PointFile>(json)?.to_point()
}

pub fn point_to_json(p: &ExtendedPoint) -> String {
    serde_json::to_string_pretty(&PointFile::from(p)).expect("point records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::samples::{dumbbell, theta};

    const THETA: &str = r#"{"vertices":[{"id":"b","weight":0},{"id":"a","weight":0}],
        "edges":[{"id":"e2","ends":["a","b"]},{"id":"e1","ends":["b","a"]},{"id":"e3","ends":["a","b"]}]}"#;

    #[test]
    fn parses_in_any_order() {
        assert_eq!(parse_graph(THETA).unwrap(), theta());
    }

    #[test]
    fn graph_round_trip() {
        for g in [theta(), dumbbell()] {
            let text = graph_to_json(&g);
            assert_eq!(parse_graph(&text).unwrap(), g);
            assert_eq!(graph_to_json(&parse_graph(&text).unwrap()), text);
        }
    }

    #[test]
    fn point_round_trip() {
        let text = format!(r#"{{"graph":{THETA},"coords":{{"e1":"0.75","e2":"inf","e3":"6/4"}}}}"#);
        let p = parse_point(&text).unwrap();
        let out = point_to_json(&p);
        assert!(out.contains(r#""e1": "3/4""#) && out.contains(r#""e2": "0""#) && out.contains(r#""e3": "3/2""#));
        assert_eq!(point_to_json(&parse_point(&out).unwrap()), out);
        assert_eq!(parse_point(&out).unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_graph("{"), Err(Error::Json(_))));
        assert!(matches!(parse_graph(r#"{"vertices":[{"id":"a","weight":-1}]}"#), Err(Error::Json(_))));
        let stray = r#"{"vertices":[{"id":"a","weight":0}],"edges":[{"id":"e","ends":["a","z"]}]}"#;
        assert!(matches!(parse_graph(stray), Err(Error::UnknownVertex(_))));
        let text = format!(r#"{{"graph":{THETA},"coords":{{"e1":"1","e2":"1"}}}}"#);
        assert!(matches!(parse_point(&text), Err(Error::MissingCoordinate(_))));
        let text = format!(r#"{{"graph":{THETA},"coords":{{"e1":"1","e2":"1","e3":"inf"}},"mode":"closed"}}"#);
        assert!(matches!(parse_point(&text), Err(Error::InfiniteInClosedCone)));
    }
}
