use serde::{Deserialize, Serialize};

use super::{DeltaComplex2, Edge, Orientation, Side, Triangle};
use crate::json::{self, OrderedEntries};

pub use crate::json::ParseError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    #[serde(default)]
    vertices: Vec<String>,
    #[serde(default)]
    edges: OrderedEntries<[String; 2]>,
    #[serde(default)]
    triangles: OrderedEntries<[(String, Orientation); 3]>,
}

impl DeltaComplex2 {
    /// Reads the JSON complex format:
    /// `{"vertices": [..], "edges": {"e": ["tail", "head"]}, "triangles": {"t": [["e", "+"], ..]}}`.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let f: ComplexFile = json::from_str(text)?;
        Ok(DeltaComplex2 {
            vertices: f.vertices,
            edges: f.edges.0.into_iter().map(|(id, [tail, head])| Edge { id, tail, head }).collect(),
            triangles: f
                .triangles
                .0
                .into_iter()
                .map(|(id, sides)| Triangle { id, sides: sides.map(|(edge, orientation)| Side { edge, orientation }) })
                .collect(),
        })
    }

    /// Pretty-printed JSON in stored order, newline terminated.
    pub fn to_json(&self) -> String {
        let f = ComplexFile {
            vertices: self.vertices.clone(),
            edges: OrderedEntries(
                self.edges.iter().map(|e| (e.id.clone(), [e.tail.clone(), e.head.clone()])).collect(),
            ),
            triangles: OrderedEntries(
                self.triangles
                    .iter()
                    .map(|t| (t.id.clone(), t.sides.clone().map(|s| (s.edge, s.orientation))))
                    .collect(),
            ),
        };
        let mut s = serde_json::to_string_pretty(&f).expect("plain data serializes");
        s.push('\n');
        s
    }
}
