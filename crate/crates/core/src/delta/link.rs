use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{DeltaComplex2, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum End {
    Tail,
    Head,
}

/// One end of an edge; the vertices of a vertex link.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfEdge {
    pub edge: String,
    pub end: End,
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = match self.end {
            End::Tail => "tail",
            End::Head => "head",
        };
        write!(f, "{}.{end}", self.edge)
    }
}

/// The link graph of a vertex: half-edges at the vertex, joined once per
/// triangle corner. `adjacency` is symmetric; a corner joining a half-edge
/// to itself (as in the dunce hat) lands on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLink {
    pub vertex: String,
    pub half_edges: Vec<HalfEdge>,
    pub adjacency: Vec<Vec<i64>>,
}

pub(super) fn vertex_links(c: &DeltaComplex2) -> Vec<VertexLink> {
    let mut links: Vec<VertexLink> = c
        .vertices()
        .iter()
        .map(|v| VertexLink { vertex: v.clone(), half_edges: Vec::new(), adjacency: Vec::new() })
        .collect();
    let vpos: HashMap<&str, usize> = c.vertices().iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut hpos: HashMap<(String, End), (usize, usize)> = HashMap::new();
    for e in c.edges() {
        for (end, v) in [(End::Tail, &e.tail), (End::Head, &e.head)] {
            let l = vpos[v.as_str()];
            hpos.insert((e.id.clone(), end), (l, links[l].half_edges.len()));
            links[l].half_edges.push(HalfEdge { edge: e.id.clone(), end });
        }
    }
    for l in &mut links {
        let n = l.half_edges.len();
        l.adjacency = vec![vec![0; n]; n];
    }
    for t in c.triangles() {
        for k in 0..3 {
            let (a, b) = (&t.sides[k], &t.sides[(k + 1) % 3]);
            let a_end = match a.orientation {
                Orientation::Plus => End::Head,
                Orientation::Minus => End::Tail,
            };
            let b_start = match b.orientation {
                Orientation::Plus => End::Tail,
                Orientation::Minus => End::Head,
            };
            let (l, i) = hpos[&(a.edge.clone(), a_end)];
            let (l2, j) = hpos[&(b.edge.clone(), b_start)];
            debug_assert_eq!(l, l2, "corner closure");
            links[l].adjacency[i][j] += 1;
            links[l].adjacency[j][i] += 1;
        }
    }
    links
}
