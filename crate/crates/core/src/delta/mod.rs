//! Two-dimensional identification complexes (Δ-complexes).
//!
//! A [`DeltaComplex2`] stores vertices, oriented edges (tail, head; loops are
//! allowed) and triangles given by three oriented sides. Nothing forces the
//! complex to be simplicial: the dunce hat has one vertex, one edge and one
//! triangle whose three sides all run along that edge.
//!
//! Cells are addressed by string identifiers. The complex keeps them in
//! insertion order and tolerates duplicates so that [`DeltaComplex2::validate`]
//! can report them as data; every other operation validates first.

mod collapse;
mod io;
mod iso;
mod link;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::Rational;

pub use collapse::{CollapseCertificate, CollapseOutcome, NotCollapsibleReason, DEFAULT_BUDGET};
pub use io::ParseError;
pub use link::{End, HalfEdge, VertexLink};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Plus => "+",
            Orientation::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Side {
    pub edge: String,
    pub orientation: Orientation,
}

impl Side {
    pub fn new(edge: impl Into<String>, orientation: Orientation) -> Self {
        Side { edge: edge.into(), orientation }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub id: String,
    pub sides: [Side; 3],
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaComplex2 {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
}

/// A broken invariant, naming the offending identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    DuplicateVertex(String),
    DuplicateEdge(String),
    DuplicateTriangle(String),
    MissingVertex {
        edge: String,
        vertex: String,
    },
    MissingEdge {
        triangle: String,
        edge: String,
    },
    /// Head of side `corner` does not meet the tail of the following side.
    OpenCorner {
        triangle: String,
        corner: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex `{v}`"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge `{e}`"),
            Violation::DuplicateTriangle(t) => write!(f, "duplicate triangle `{t}`"),
            Violation::MissingVertex { edge, vertex } => {
                write!(f, "edge `{edge}` references missing vertex `{vertex}`")
            }
            Violation::MissingEdge { triangle, edge } => {
                write!(f, "triangle `{triangle}` references missing edge `{edge}`")
            }
            Violation::OpenCorner { triangle, corner } => {
                write!(f, "triangle `{triangle}` does not close at corner {corner}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeltaError {
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
    #[error("complex is disconnected ({components} components); collapsibility is per component")]
    Disconnected { components: usize },
    #[error("face not free: {0}")]
    NotFree(String),
    #[error("isomorphism test limited to {limit} cells per dimension")]
    TooLarge { limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DimPair {
    /// A free vertex collapsed together with its edge.
    #[serde(rename = "0-1")]
    VertexEdge,
    /// A free edge collapsed together with its triangle.
    #[serde(rename = "1-2")]
    EdgeTriangle,
}

impl fmt::Display for DimPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimPair::VertexEdge => "(0,1)",
            DimPair::EdgeTriangle => "(1,2)",
        })
    }
}

/// A face together with its unique cofacet. Field order gives the
/// deterministic search order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreePair {
    pub dims: DimPair,
    pub face: String,
    pub cofacet: String,
}

impl fmt::Display for FreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} < {}", self.dims, self.face, self.cofacet)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Betti {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
}

impl Betti {
    pub fn euler(&self) -> i64 {
        self.b0 as i64 - self.b1 as i64 + self.b2 as i64
    }

    pub fn is_point_like(&self) -> bool {
        (self.b0, self.b1, self.b2) == (1, 0, 0)
    }
}

impl fmt::Display for Betti {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.b0, self.b1, self.b2)
    }
}

impl DeltaComplex2 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> &mut Self {
        self.vertices.push(id.into());
        self
    }

    pub fn add_edge(&mut self, id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>) -> &mut Self {
        self.edges.push(Edge { id: id.into(), tail: tail.into(), head: head.into() });
        self
    }

    pub fn add_triangle(&mut self, id: impl Into<String>, sides: [Side; 3]) -> &mut Self {
        self.triangles.push(Triangle { id: id.into(), sides });
        self
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.triangles.len())
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty() && self.triangles.is_empty()
    }

    /// Disjoint union; identifiers of `other` are prefixed to stay unique.
    pub fn disjoint_union(&self, other: &DeltaComplex2, prefix: &str) -> DeltaComplex2 {
        let mut out = self.clone();
        let p = |s: &str| format!("{prefix}{s}");
        out.vertices.extend(other.vertices.iter().map(|v| p(v)));
        out.edges.extend(other.edges.iter().map(|e| Edge { id: p(&e.id), tail: p(&e.tail), head: p(&e.head) }));
        out.triangles.extend(other.triangles.iter().map(|t| Triangle {
            id: p(&t.id),
            sides: t.sides.clone().map(|s| Side { edge: p(&s.edge), orientation: s.orientation }),
        }));
        out
    }

    /// Start and end vertex of a side after applying its orientation.
    fn side_ends<'a>(&self, edges: &HashMap<&str, &'a Edge>, side: &Side) -> Option<(&'a str, &'a str)> {
        let e = edges.get(side.edge.as_str())?;
        Some(match side.orientation {
            Orientation::Plus => (e.tail.as_str(), e.head.as_str()),
            Orientation::Minus => (e.head.as_str(), e.tail.as_str()),
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                violations.push(Violation::DuplicateVertex(v.clone()));
            }
        }
        let vertices = seen;
        let mut edges: HashMap<&str, &Edge> = HashMap::new();
        for e in &self.edges {
            if edges.insert(e.id.as_str(), e).is_some() {
                violations.push(Violation::DuplicateEdge(e.id.clone()));
            }
            for v in [&e.tail, &e.head] {
                if !vertices.contains(v.as_str()) {
                    violations.push(Violation::MissingVertex { edge: e.id.clone(), vertex: v.clone() });
                }
            }
        }
        let mut tri_ids = BTreeSet::new();
        for t in &self.triangles {
            if !tri_ids.insert(t.id.as_str()) {
                violations.push(Violation::DuplicateTriangle(t.id.clone()));
            }
            let mut complete = true;
            for s in &t.sides {
                if !edges.contains_key(s.edge.as_str()) {
                    complete = false;
                    violations.push(Violation::MissingEdge { triangle: t.id.clone(), edge: s.edge.clone() });
                }
            }
            if !complete {
                continue;
            }
            for k in 0..3 {
                let (_, head) = self.side_ends(&edges, &t.sides[k]).expect("edge checked");
                let (tail, _) = self.side_ends(&edges, &t.sides[(k + 1) % 3]).expect("edge checked");
                if head != tail {
                    violations.push(Violation::OpenCorner { triangle: t.id.clone(), corner: k });
                }
            }
        }
        ValidationReport { violations }
    }

    fn require_valid(&self) -> Result<(), DeltaError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(DeltaError::Invalid(report))
        }
    }

    pub fn euler_characteristic(&self) -> Result<i64, DeltaError> {
        self.require_valid()?;
        let (v, e, t) = self.counts();
        Ok(v as i64 - e as i64 + t as i64)
    }

    /// `∂₁ : ℚ^E → ℚ^V` (edge ↦ head − tail) and `∂₂ : ℚ^T → ℚ^E`
    /// (side with `+` contributes +1, with `-` contributes −1).
    pub fn boundary_matrices<S: Scalar>(&self) -> Result<(Matrix<S>, Matrix<S>), DeltaError> {
        self.require_valid()?;
        let vidx: HashMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let eidx: HashMap<&str, usize> = self.edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        let mut d1 = Matrix::<S>::zeros(self.vertices.len(), self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            let (t, h) = (vidx[e.tail.as_str()], vidx[e.head.as_str()]);
            d1[(h, j)] = d1[(h, j)].clone() + S::one();
            d1[(t, j)] = d1[(t, j)].clone() - S::one();
        }
        let mut d2 = Matrix::<S>::zeros(self.edges.len(), self.triangles.len());
        for (j, t) in self.triangles.iter().enumerate() {
            for s in &t.sides {
                let i = eidx[s.edge.as_str()];
                d2[(i, j)] = d2[(i, j)].clone() + S::from_i64(s.orientation.sign());
            }
        }
        Ok((d1, d2))
    }

    /// Rational Betti numbers of the cellular chain complex.
    pub fn betti_numbers(&self) -> Result<Betti, DeltaError> {
        self.betti_numbers_over::<Rational>()
    }

    pub fn betti_numbers_over<S: Scalar>(&self) -> Result<Betti, DeltaError> {
        let (d1, d2) = self.boundary_matrices::<S>()?;
        let (r1, r2) = (d1.rank(), d2.rank());
        let (v, e, t) = self.counts();
        Ok(Betti { b0: v - r1, b1: e - r1 - r2, b2: t - r2 })
    }

    /// Number of connected components (0 for the empty complex).
    pub fn component_count(&self) -> Result<usize, DeltaError> {
        self.require_valid()?;
        let idx: HashMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, idx[e.tail.as_str()]), find(&mut parent, idx[e.head.as_str()]));
            parent[a] = b;
        }
        Ok((0..self.vertices.len()).filter(|&i| find(&mut parent, i) == i).count())
    }

    /// Every free face with its unique cofacet, in search order.
    ///
    /// An edge is free when it occurs exactly once among all triangle sides.
    /// A vertex is free when it occurs exactly once among all edge endpoints
    /// (a loop counts twice) and that edge is not a side of any triangle, so
    /// that removing the pair leaves a complex.
    pub fn free_faces(&self) -> Result<Vec<FreePair>, DeltaError> {
        self.require_valid()?;
        let mut side_uses: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for t in &self.triangles {
            for s in &t.sides {
                side_uses.entry(s.edge.as_str()).or_default().push(t.id.as_str());
            }
        }
        let mut endpoint_uses: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &self.edges {
            endpoint_uses.entry(e.tail.as_str()).or_default().push(e.id.as_str());
            endpoint_uses.entry(e.head.as_str()).or_default().push(e.id.as_str());
        }
        let mut out = Vec::new();
        for (v, uses) in &endpoint_uses {
            if let [e] = uses.as_slice() {
                if !side_uses.contains_key(e) {
                    out.push(FreePair { dims: DimPair::VertexEdge, face: v.to_string(), cofacet: e.to_string() });
                }
            }
        }
        for (e, uses) in &side_uses {
            if let [t] = uses.as_slice() {
                out.push(FreePair { dims: DimPair::EdgeTriangle, face: e.to_string(), cofacet: t.to_string() });
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn elementary_collapse(&self, pair: &FreePair) -> Result<DeltaComplex2, DeltaError> {
        let free = self.free_faces()?;
        if !free.contains(pair) {
            return Err(DeltaError::NotFree(format!("`{}` is not a free face of `{}`", pair.face, pair.cofacet)));
        }
        let mut out = self.clone();
        match pair.dims {
            DimPair::VertexEdge => {
                out.vertices.retain(|v| *v != pair.face);
                out.edges.retain(|e| e.id != pair.cofacet);
            }
            DimPair::EdgeTriangle => {
                out.edges.retain(|e| e.id != pair.face);
                out.triangles.retain(|t| t.id != pair.cofacet);
            }
        }
        Ok(out)
    }

    /// Exhaustive, budgeted search for a collapse sequence down to one vertex.
    pub fn collapse_search(&self, budget: u64) -> Result<CollapseOutcome, DeltaError> {
        collapse::search(self, budget)
    }

    /// Isomorphism up to renaming of cells, reversal of edges, and the
    /// dihedral relabeling of each triangle's sides.
    pub fn is_isomorphic(&self, other: &DeltaComplex2) -> Result<bool, DeltaError> {
        iso::is_isomorphic(self, other)
    }

    pub fn vertex_links(&self) -> Result<Vec<VertexLink>, DeltaError> {
        self.require_valid()?;
        Ok(link::vertex_links(self))
    }
}

/// One vertex `v`, one loop `a`, one triangle with boundary word `a a a⁻¹`.
pub fn dunce_hat() -> DeltaComplex2 {
    let mut c = DeltaComplex2::new();
    c.add_vertex("v").add_edge("a", "v", "v").add_triangle(
        "t",
        [Side::new("a", Orientation::Plus), Side::new("a", Orientation::Plus), Side::new("a", Orientation::Minus)],
    );
    c
}

/// A single triangle with three distinct edges and vertices.
pub fn disc() -> DeltaComplex2 {
    let mut c = DeltaComplex2::new();
    c.add_vertex("v0")
        .add_vertex("v1")
        .add_vertex("v2")
        .add_edge("e01", "v0", "v1")
        .add_edge("e12", "v1", "v2")
        .add_edge("e02", "v0", "v2")
        .add_triangle(
            "t",
            [
                Side::new("e01", Orientation::Plus),
                Side::new("e12", Orientation::Plus),
                Side::new("e02", Orientation::Minus),
            ],
        );
    c
}

/// The square torus `a b a⁻¹ b⁻¹` cut along the diagonal `c`.
pub fn torus() -> DeltaComplex2 {
    use Orientation::{Minus, Plus};
    let mut c = DeltaComplex2::new();
    c.add_vertex("v")
        .add_edge("a", "v", "v")
        .add_edge("b", "v", "v")
        .add_edge("c", "v", "v")
        .add_triangle("t1", [Side::new("a", Plus), Side::new("b", Plus), Side::new("c", Minus)])
        .add_triangle("t2", [Side::new("b", Plus), Side::new("a", Plus), Side::new("c", Minus)]);
    c
}

/// Genus-two surface from the octagon `a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹`, fanned from
/// one corner: one vertex, nine edges, six triangles.
pub fn genus_two() -> DeltaComplex2 {
    use Orientation::{Minus, Plus};
    let mut c = DeltaComplex2::new();
    c.add_vertex("v");
    for e in ["a", "b", "c", "d", "x1", "x2", "x3", "x4", "x5"] {
        c.add_edge(e, "v", "v");
    }
    // boundary word read from corner 0; diagonal xk joins corner 0 to corner k+1
    let word =
        [("a", Plus), ("b", Plus), ("a", Minus), ("b", Minus), ("c", Plus), ("d", Plus), ("c", Minus), ("d", Minus)];
    let diag = |k: usize| -> String { format!("x{k}") };
    for k in 0..6 {
        let first = if k == 0 { Side::new(word[0].0, word[0].1) } else { Side::new(diag(k), Plus) };
        let second = Side::new(word[k + 1].0, word[k + 1].1);
        let third = if k == 5 { Side::new(word[7].0, word[7].1) } else { Side::new(diag(k + 1), Minus) };
        c.add_triangle(format!("t{k}"), [first, second, third]);
    }
    c
}
