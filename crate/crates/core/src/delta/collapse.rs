use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::{DeltaComplex2, DeltaError, DimPair, FreePair};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Replayable sequence of elementary collapses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    pub steps: Vec<FreePair>,
}

impl CollapseCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays every step and checks the result is a single vertex.
    pub fn replay(&self, start: &DeltaComplex2) -> Result<DeltaComplex2, DeltaError> {
        let mut cur = start.clone();
        for step in &self.steps {
            cur = cur.elementary_collapse(step)?;
        }
        let (v, e, t) = cur.counts();
        if (v, e, t) != (1, 0, 0) {
            return Err(DeltaError::NotFree(format!("replay ended at {v} vertices, {e} edges, {t} triangles")));
        }
        Ok(cur)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NotCollapsibleReason {
    NoFreeFaces,
    /// Every branch of the collapse tree was explored.
    Exhausted {
        explored: u64,
    },
}

impl fmt::Display for NotCollapsibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotCollapsibleReason::NoFreeFaces => f.write_str("no free faces exist"),
            NotCollapsibleReason::Exhausted { explored } => {
                write!(f, "collapse tree exhausted after {explored} nodes")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CollapseOutcome {
    Collapsible(CollapseCertificate),
    NotCollapsible(NotCollapsibleReason),
    Unknown { explored: u64 },
}

/// Cells re-indexed in identifier order so that index order is the
/// lexicographic search order.
struct Indexed {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    edge_ids: Vec<String>,
    tris: Vec<[usize; 3]>,
    tri_ids: Vec<String>,
}

impl Indexed {
    fn new(c: &DeltaComplex2) -> Self {
        let mut vertices: Vec<String> = c.vertices().to_vec();
        vertices.sort();
        let vidx: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut edges: Vec<_> = c.edges().iter().collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let eidx: HashMap<&str, usize> = edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        let mut tris: Vec<_> = c.triangles().iter().collect();
        tris.sort_by(|a, b| a.id.cmp(&b.id));
        Indexed {
            edges: edges.iter().map(|e| (vidx[e.tail.as_str()], vidx[e.head.as_str()])).collect(),
            edge_ids: edges.iter().map(|e| e.id.clone()).collect(),
            tris: tris.iter().map(|t| t.sides.clone().map(|s| eidx[s.edge.as_str()])).collect(),
            tri_ids: tris.iter().map(|t| t.id.clone()).collect(),
            vertices,
        }
    }
}

/// Alive flags for vertices, then edges, then triangles.
#[derive(Clone, PartialEq, Eq, Hash)]
struct State(Vec<u64>);

impl State {
    fn full(n: usize) -> Self {
        let mut words = vec![!0u64; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        State(words)
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1u64 << (i % 64));
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Move {
    VertexEdge(usize, usize),
    EdgeTriangle(usize, usize),
}

struct Search<'a> {
    ix: &'a Indexed,
    budget: u64,
    explored: u64,
    dead: HashSet<State>,
    path: Vec<Move>,
}

impl Search<'_> {
    fn e_off(&self) -> usize {
        self.ix.vertices.len()
    }

    fn t_off(&self) -> usize {
        self.ix.vertices.len() + self.ix.edges.len()
    }

    fn moves(&self, s: &State) -> Vec<Move> {
        let (nv, ne) = (self.ix.vertices.len(), self.ix.edges.len());
        let mut side_count = vec![0u32; ne];
        let mut side_owner = vec![usize::MAX; ne];
        for (t, sides) in self.ix.tris.iter().enumerate() {
            if !s.get(self.t_off() + t) {
                continue;
            }
            for &e in sides {
                side_count[e] += 1;
                side_owner[e] = t;
            }
        }
        let mut end_count = vec![0u32; nv];
        let mut end_owner = vec![usize::MAX; nv];
        for (e, &(a, b)) in self.ix.edges.iter().enumerate() {
            if !s.get(self.e_off() + e) {
                continue;
            }
            for v in [a, b] {
                end_count[v] += 1;
                end_owner[v] = e;
            }
        }
        let mut out = Vec::new();
        for v in 0..nv {
            if s.get(v) && end_count[v] == 1 && side_count[end_owner[v]] == 0 {
                out.push(Move::VertexEdge(v, end_owner[v]));
            }
        }
        for e in 0..ne {
            if s.get(self.e_off() + e) && side_count[e] == 1 {
                out.push(Move::EdgeTriangle(e, side_owner[e]));
            }
        }
        out
    }

    fn apply(&self, s: &State, m: Move) -> State {
        let mut n = s.clone();
        match m {
            Move::VertexEdge(v, e) => {
                n.clear(v);
                n.clear(self.e_off() + e);
            }
            Move::EdgeTriangle(e, t) => {
                n.clear(self.e_off() + e);
                n.clear(self.t_off() + t);
            }
        }
        n
    }

    /// `Some(true)` found, `Some(false)` subtree exhausted, `None` out of budget.
    fn dfs(&mut self, s: &State) -> Option<bool> {
        if s.count() == 1 && (0..self.ix.vertices.len()).any(|v| s.get(v)) {
            return Some(true);
        }
        if self.dead.contains(s) {
            return Some(false);
        }
        if self.explored >= self.budget {
            return None;
        }
        self.explored += 1;
        let mut exhausted = true;
        for m in self.moves(s) {
            let next = self.apply(s, m);
            self.path.push(m);
            match self.dfs(&next) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => exhausted = false,
            }
            self.path.pop();
            if !exhausted {
                return None;
            }
        }
        self.dead.insert(s.clone());
        Some(false)
    }

    fn certificate(&self) -> CollapseCertificate {
        let steps = self
            .path
            .iter()
            .map(|&m| match m {
                Move::VertexEdge(v, e) => FreePair {
                    dims: DimPair::VertexEdge,
                    face: self.ix.vertices[v].clone(),
                    cofacet: self.ix.edge_ids[e].clone(),
                },
                Move::EdgeTriangle(e, t) => FreePair {
                    dims: DimPair::EdgeTriangle,
                    face: self.ix.edge_ids[e].clone(),
                    cofacet: self.ix.tri_ids[t].clone(),
                },
            })
            .collect();
        CollapseCertificate { steps }
    }
}

pub(super) fn search(c: &DeltaComplex2, budget: u64) -> Result<CollapseOutcome, DeltaError> {
    let components = c.component_count()?;
    if components != 1 {
        return Err(DeltaError::Disconnected { components });
    }
    let ix = Indexed::new(c);
    let n = ix.vertices.len() + ix.edges.len() + ix.tris.len();
    let start = State::full(n);
    let mut s = Search { ix: &ix, budget, explored: 0, dead: HashSet::new(), path: Vec::new() };
    if s.moves(&start).is_empty() && n > 1 {
        return Ok(CollapseOutcome::NotCollapsible(NotCollapsibleReason::NoFreeFaces));
    }
    Ok(match s.dfs(&start) {
        Some(true) => CollapseOutcome::Collapsible(s.certificate()),
        Some(false) => CollapseOutcome::NotCollapsible(NotCollapsibleReason::Exhausted { explored: s.explored }),
        None => CollapseOutcome::Unknown { explored: s.explored },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{disc, dunce_hat, genus_two, torus, Orientation, Side};

    #[test]
    fn dunce_hat_has_no_free_faces() {
        let out = dunce_hat().collapse_search(1000).unwrap();
        assert_eq!(out, CollapseOutcome::NotCollapsible(NotCollapsibleReason::NoFreeFaces));
        assert_eq!(NotCollapsibleReason::NoFreeFaces.to_string(), "no free faces exist");
    }

    #[test]
    fn disc_collapses_in_three_steps() {
        // 3 vertices + 3 edges + 1 triangle, two cells per step, one vertex left
        let cells = 3 + 3 + 1;
        let expected_len = (cells - 1) / 2;
        let CollapseOutcome::Collapsible(cert) = disc().collapse_search(1000).unwrap() else {
            panic!("disc must collapse");
        };
        assert_eq!(cert.len(), expected_len);
        assert_eq!(cert.steps[0].dims, DimPair::EdgeTriangle);
        // lexicographically first free edge
        assert_eq!(cert.steps[0].face, "e01");
        cert.replay(&disc()).unwrap();
    }

    #[test]
    fn torus_is_not_collapsible() {
        let out = torus().collapse_search(1_000_000).unwrap();
        assert!(matches!(out, CollapseOutcome::NotCollapsible(_)));
    }

    #[test]
    fn single_vertex_is_trivially_collapsible() {
        let mut c = DeltaComplex2::new();
        c.add_vertex("p");
        let out = c.collapse_search(10).unwrap();
        assert_eq!(out, CollapseOutcome::Collapsible(CollapseCertificate { steps: vec![] }));
    }

    #[test]
    fn disconnected_is_rejected() {
        let c = disc().disjoint_union(&disc(), "b.");
        assert_eq!(c.collapse_search(10), Err(DeltaError::Disconnected { components: 2 }));
        assert!(matches!(DeltaComplex2::new().collapse_search(10), Err(DeltaError::Disconnected { components: 0 })));
    }

    #[test]
    fn circle_exhausts() {
        // a triangle boundary: no free faces, loop of three edges
        let mut c = DeltaComplex2::new();
        c.add_vertex("a").add_vertex("b").add_vertex("c");
        c.add_edge("ab", "a", "b").add_edge("bc", "b", "c").add_edge("ca", "c", "a");
        let out = c.collapse_search(100).unwrap();
        assert_eq!(out, CollapseOutcome::NotCollapsible(NotCollapsibleReason::NoFreeFaces));
        // with a whisker there is a free face, but the circle remains
        c.add_vertex("w").add_edge("aw", "a", "w");
        let out = c.collapse_search(100).unwrap();
        assert!(matches!(out, CollapseOutcome::NotCollapsible(NotCollapsibleReason::Exhausted { .. })));
    }

    #[test]
    fn budget_is_respected() {
        // a strip of triangles has many collapse orders; a budget of 1 stops early
        let mut c = DeltaComplex2::new();
        for i in 0..6 {
            c.add_vertex(format!("v{i}"));
        }
        for i in 0..5 {
            c.add_edge(format!("s{i}"), format!("v{i}"), format!("v{}", i + 1));
        }
        for i in 0..4 {
            c.add_edge(format!("d{i}"), format!("v{i}"), format!("v{}", i + 2));
            c.add_triangle(
                format!("t{i}"),
                [
                    Side::new(format!("s{i}"), Orientation::Plus),
                    Side::new(format!("s{}", i + 1), Orientation::Plus),
                    Side::new(format!("d{i}"), Orientation::Minus),
                ],
            );
        }
        assert_eq!(c.collapse_search(1).unwrap(), CollapseOutcome::Unknown { explored: 1 });
        let CollapseOutcome::Collapsible(cert) = c.collapse_search(DEFAULT_BUDGET).unwrap() else {
            panic!("strip collapses");
        };
        cert.replay(&c).unwrap();
    }

    #[test]
    fn genus_two_has_no_free_faces() {
        let out = genus_two().collapse_search(1000).unwrap();
        assert_eq!(out, CollapseOutcome::NotCollapsible(NotCollapsibleReason::NoFreeFaces));
    }
}
