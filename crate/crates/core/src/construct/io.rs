//! The JSON construct format.
//!
//! ```json
//! {
//!   "components": [{
//!     "name": "X",
//!     "lattice": {"type": "blown_up_plane", "n": 9},
//!     "branches": [{"class": [3, -1, -1, -1, -1, -1, -1, -1, -1, 0], "nodes": 1, "marks": ["p1", "p2", "p3"]}]
//!   }],
//!   "gluings": [{"from": [0, 0], "to": [0, 1], "map": [["p1", "q2"]]}],
//!   "identifications": [["p1", "p2"]],
//!   "triple_points": [["p1", "p3", "p2"]]
//! }
//! ```
//!
//! A mark is referenced either by its label, when that label is unique in the
//! whole construct, or as `[component, branch, label]`. Lattices may also be
//! given as `{"type": "gram", "labels": [..], "gram": [[..]], "canonical": [..]}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Branch, BranchRef, Component, Construct, ConstructError, EdgeGluing, MarkRef, TriplePoint};
use crate::json::{self, ParseError};
use crate::lattice::{DivisorClass, IntersectionLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructFileError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("component {component}: {source}")]
    Lattice { component: usize, source: LatticeError },
    #[error("unknown mark `{0}`")]
    UnknownMark(String),
    #[error("mark label `{0}` is used on several branches; use [component, branch, label]")]
    AmbiguousMark(String),
    #[error("{0}")]
    Invalid(#[from] ConstructError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum LatticeSpec {
    BlownUpPlane { n: usize },
    Gram { labels: Vec<String>, gram: Vec<Vec<i64>>, canonical: Vec<i64> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchSpec {
    class: Vec<i64>,
    #[serde(default)]
    nodes: u32,
    #[serde(default)]
    marks: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    lattice: LatticeSpec,
    #[serde(default)]
    branches: Vec<BranchSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingSpec {
    from: (usize, usize),
    to: (usize, usize),
    #[serde(default)]
    map: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MarkSpec {
    Label(String),
    Full(usize, usize, String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstructFile {
    #[serde(default)]
    components: Vec<ComponentSpec>,
    #[serde(default)]
    gluings: Vec<GluingSpec>,
    #[serde(default)]
    identifications: Vec<Vec<MarkSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    triple_points: Option<Vec<[MarkSpec; 3]>>,
}

impl Construct {
    pub fn from_json(text: &str) -> Result<Self, ConstructFileError> {
        let f: ConstructFile = json::from_str(text)?;
        let mut components = Vec::new();
        for (c, spec) in f.components.into_iter().enumerate() {
            let lattice = match spec.lattice {
                LatticeSpec::BlownUpPlane { n } => IntersectionLattice::blown_up_plane(n),
                LatticeSpec::Gram { labels, gram, canonical } => {
                    IntersectionLattice::from_gram(labels, gram, canonical)
                        .map_err(|source| ConstructFileError::Lattice { component: c, source })?
                }
            };
            let branches = spec
                .branches
                .into_iter()
                .map(|b| Branch { class: DivisorClass(b.class), nodes: b.nodes, marks: b.marks })
                .collect();
            components.push(Component { name: spec.name.unwrap_or_else(|| format!("X{c}")), lattice, branches });
        }

        let mut by_label: HashMap<&str, Vec<MarkRef>> = HashMap::new();
        for (c, comp) in components.iter().enumerate() {
            for (b, br) in comp.branches.iter().enumerate() {
                for l in &br.marks {
                    by_label.entry(l.as_str()).or_default().push(MarkRef::new(c, b, l.clone()));
                }
            }
        }
        let resolve = |m: MarkSpec| -> Result<MarkRef, ConstructFileError> {
            match m {
                MarkSpec::Full(c, b, l) => Ok(MarkRef::new(c, b, l)),
                MarkSpec::Label(l) => match by_label.get(l.as_str()).map(Vec::as_slice) {
                    Some([m]) => Ok(m.clone()),
                    Some(_) => Err(ConstructFileError::AmbiguousMark(l)),
                    None => Err(ConstructFileError::UnknownMark(l)),
                },
            }
        };
        let identifications = f
            .identifications
            .into_iter()
            .map(|ms| ms.into_iter().map(&resolve).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let triple_points = f
            .triple_points
            .map(|tps| {
                tps.into_iter()
                    .map(|[a, b, c]| Ok(TriplePoint { slots: [resolve(a)?, resolve(b)?, resolve(c)?] }))
                    .collect::<Result<Vec<_>, ConstructFileError>>()
            })
            .transpose()?;
        let gluings = f
            .gluings
            .into_iter()
            .map(|g| EdgeGluing {
                from: BranchRef { component: g.from.0, branch: g.from.1 },
                to: BranchRef { component: g.to.0, branch: g.to.1 },
                map: g.map,
            })
            .collect();
        Ok(Construct::new(components, gluings, identifications, triple_points)?)
    }

    /// Pretty-printed JSON with a trailing newline; triple points are written
    /// out so that their cyclic orders survive a round trip.
    pub fn to_json(&self) -> String {
        let mut count: HashMap<&str, usize> = HashMap::new();
        for comp in &self.components {
            for br in &comp.branches {
                for l in &br.marks {
                    *count.entry(l.as_str()).or_default() += 1;
                }
            }
        }
        let spec = |m: &MarkRef| {
            if count.get(m.label.as_str()) == Some(&1) {
                MarkSpec::Label(m.label.clone())
            } else {
                MarkSpec::Full(m.component, m.branch, m.label.clone())
            }
        };
        let file = ConstructFile {
            components: self
                .components
                .iter()
                .map(|c| ComponentSpec {
                    name: Some(c.name.clone()),
                    lattice: lattice_spec(&c.lattice),
                    branches: c
                        .branches
                        .iter()
                        .map(|b| BranchSpec { class: b.class.0.clone(), nodes: b.nodes, marks: b.marks.clone() })
                        .collect(),
                })
                .collect(),
            gluings: self
                .gluings
                .iter()
                .map(|g| GluingSpec {
                    from: (g.from.component, g.from.branch),
                    to: (g.to.component, g.to.branch),
                    map: g.map.clone(),
                })
                .collect(),
            identifications: self.identifications.iter().map(|s| s.iter().map(spec).collect()).collect(),
            triple_points: Some(self.triple_points.iter().map(|t| t.slots.each_ref().map(spec)).collect()),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }
}

fn lattice_spec(l: &IntersectionLattice) -> LatticeSpec {
    match l.blowup_count() {
        Some(n) if l.labels() == IntersectionLattice::blown_up_plane(n).labels() => LatticeSpec::BlownUpPlane { n },
        _ => {
            LatticeSpec::Gram { labels: l.labels().to_vec(), gram: l.gram().to_vec(), canonical: l.canonical_class().0 }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::duncehat_construct;
    use crate::construct::fixtures::{cycle_of_planes, two_planes};

    #[test]
    fn round_trips() {
        for x in [duncehat_construct(), two_planes(), cycle_of_planes(true), cycle_of_planes(false)] {
            let text = x.to_json();
            let y = Construct::from_json(&text).unwrap();
            assert_eq!(x, y);
            assert_eq!(text, y.to_json());
        }
    }

    #[test]
    fn reads_the_short_form() {
        let text = r#"{
  "components": [{
    "lattice": {"type": "blown_up_plane", "n": 9},
    "branches": [
      {"class": [3, -1, -1, -1, -1, -1, -1, -1, -1, 0], "nodes": 1, "marks": ["p1", "p2", "p3"]},
      {"class": [3, -1, -1, -1, -1, -1, -1, -1, -1, -1], "nodes": 1, "marks": ["q1", "q2", "q3"]}
    ]
  }],
  "gluings": [{"from": [0, 0], "to": [0, 1], "map": [["p1", "q2"], ["p2", "q3"], ["p3", "q1"]]}],
  "identifications": [["p1", "p2"], ["q1", "q2"], ["p3", [0, 1, "q3"]]]
}"#;
        let x = Construct::from_json(text).unwrap();
        assert_eq!(x.components()[0].name, "X0");
        assert_eq!(x.triple_points().len(), 1);
        assert_eq!(x.smoothing_euler().unwrap(), 11);
    }

    #[test]
    fn gram_lattices_and_errors() {
        let text = r#"{"components": [{"lattice": {"type": "gram", "labels": ["A"], "gram": [[2]], "canonical": [0]},
                        "branches": [{"class": [1]}]}]}"#;
        let x = Construct::from_json(text).unwrap();
        assert!(!x.lattice(0).is_plane_blowup());
        assert_eq!(Construct::from_json(&x.to_json()).unwrap(), x);

        let err = Construct::from_json(r#"{"components": [{"lattice": {"type": "cone"}}]}"#).unwrap_err();
        assert!(matches!(err, ConstructFileError::Parse(ref p) if p.path == "components[0].lattice.type"), "{err}");

        let err = Construct::from_json(r#"{"identifications": [["zz"]]}"#).unwrap_err();
        assert_eq!(err, ConstructFileError::UnknownMark("zz".into()));

        let dup = r#"{"components": [{"lattice": {"type": "blown_up_plane", "n": 0},
            "branches": [{"class": [1], "marks": ["a"]}, {"class": [1], "marks": ["a"]}]}],
            "identifications": [["a"]]}"#;
        assert_eq!(Construct::from_json(dup).unwrap_err(), ConstructFileError::AmbiguousMark("a".into()));

        let bad = r#"{"components": [{"lattice": {"type": "blown_up_plane", "n": 1}, "branches": [{"class": [1]}]}]}"#;
        assert!(matches!(
            Construct::from_json(bad),
            Err(ConstructFileError::Invalid(ConstructError::ClassSize { .. }))
        ));

        let huge = r#"{"components": [{"lattice": {"type": "blown_up_plane", "n": 0},
            "branches": [{"class": [9223372036854775807]}]}]}"#;
        assert!(matches!(
            Construct::from_json(huge),
            Err(ConstructFileError::Invalid(ConstructError::Intersection { source: LatticeError::Overflow, .. }))
        ));
    }
}
