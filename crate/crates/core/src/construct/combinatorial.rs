//! Exhaustive search for half-edge labelings of a Δ-complex whose vertex
//! link matrices have positive index of inertia at most one.
//!
//! The link matrix of a vertex has the link adjacency off the diagonal and the
//! labels of the half-edges at that vertex on the diagonal. Any principal
//! submatrix has positive inertia at most that of the full matrix, so a
//! partial labeling whose assigned block already has two positive directions
//! is abandoned.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::delta::{DeltaComplex2, DeltaError, End, HalfEdge, VertexLink};
use crate::matrix::Matrix;

type Exact = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coupling {
    /// Every half-edge label is chosen independently.
    Free,
    /// The two ends of an edge carry `n` and `-t - n`, where `t` counts the
    /// triangle sides along the edge.
    TriplePointFormula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabelSearch {
    pub min: i64,
    pub max: i64,
    pub coupling: Coupling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LabelingOutcome {
    /// A labeling passing at every vertex, listed per half-edge.
    Found { labels: Vec<(HalfEdge, i64)>, explored: u64 },
    /// Every labeling in range fails somewhere.
    Exhausted { explored: u64 },
}

impl LabelingOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, LabelingOutcome::Found { .. })
    }

    pub fn explored(&self) -> u64 {
        match self {
            LabelingOutcome::Found { explored, .. } | LabelingOutcome::Exhausted { explored } => *explored,
        }
    }
}

/// Tail slot, head slot and triangle-side count of an edge.
type EdgeEnds = ((usize, usize), (usize, usize), i64);

struct Search<'a> {
    links: &'a [VertexLink],
    labels: Vec<Vec<Option<i64>>>,
    explored: u64,
}

impl Search<'_> {
    /// Positive inertia of the labeled block of a link matrix is at most one.
    fn vertex_ok(&self, v: usize) -> bool {
        let assigned: Vec<usize> = (0..self.labels[v].len()).filter(|&i| self.labels[v][i].is_some()).collect();
        if assigned.is_empty() {
            return true;
        }
        let adj = &self.links[v].adjacency;
        let rows: Vec<Vec<Exact>> = assigned
            .iter()
            .map(|&i| {
                assigned
                    .iter()
                    .map(|&j| {
                        let d = if i == j { self.labels[v][i].expect("assigned") } else { 0 };
                        Exact::from_integer((adj[i][j] + d) as i128)
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).and_then(|m| m.positive_inertia()).expect("symmetric") <= 1
    }

    fn free(&mut self, v: usize, i: usize, range: (i64, i64)) -> bool {
        if i == self.labels[v].len() {
            return true;
        }
        for n in range.0..=range.1 {
            self.explored += 1;
            self.labels[v][i] = Some(n);
            if self.vertex_ok(v) && self.free(v, i + 1, range) {
                return true;
            }
        }
        self.labels[v][i] = None;
        false
    }

    fn coupled(&mut self, k: usize, ends: &[EdgeEnds], range: (i64, i64)) -> bool {
        if k == ends.len() {
            return true;
        }
        let ((tv, ti), (hv, hi), t) = ends[k];
        for n in range.0..=range.1 {
            let m = -t - n;
            if m < range.0 || m > range.1 {
                continue;
            }
            self.explored += 1;
            self.labels[tv][ti] = Some(n);
            self.labels[hv][hi] = Some(m);
            if self.vertex_ok(tv) && (hv == tv || self.vertex_ok(hv)) && self.coupled(k + 1, ends, range) {
                return true;
            }
        }
        self.labels[tv][ti] = None;
        self.labels[hv][hi] = None;
        false
    }
}

/// Searches labels in `min..=max` in ascending order; the first labeling
/// found is the lexicographically smallest.
pub fn search_labelings(complex: &DeltaComplex2, search: &LabelSearch) -> Result<LabelingOutcome, DeltaError> {
    let links = complex.vertex_links()?;
    let mut s =
        Search { links: &links, labels: links.iter().map(|l| vec![None; l.half_edges.len()]).collect(), explored: 0 };
    let range = (search.min, search.max);
    let found = match search.coupling {
        Coupling::Free => (0..links.len()).all(|v| s.free(v, 0, range)),
        Coupling::TriplePointFormula => {
            let mut pos: HashMap<HalfEdge, (usize, usize)> = HashMap::new();
            for (v, l) in links.iter().enumerate() {
                for (i, h) in l.half_edges.iter().enumerate() {
                    pos.insert(h.clone(), (v, i));
                }
            }
            let mut sides: HashMap<&str, i64> = HashMap::new();
            for t in complex.triangles() {
                for side in &t.sides {
                    *sides.entry(side.edge.as_str()).or_default() += 1;
                }
            }
            let ends: Vec<_> = complex
                .edges()
                .iter()
                .map(|e| {
                    let h = |end| pos[&HalfEdge { edge: e.id.clone(), end }];
                    (h(End::Tail), h(End::Head), sides.get(e.id.as_str()).copied().unwrap_or(0))
                })
                .collect();
            s.coupled(0, &ends, range)
        }
    };
    if !found {
        return Ok(LabelingOutcome::Exhausted { explored: s.explored });
    }
    let labels = links
        .iter()
        .zip(&s.labels)
        .flat_map(|(l, ls)| l.half_edges.iter().cloned().zip(ls.iter().map(|n| n.expect("complete"))))
        .collect();
    Ok(LabelingOutcome::Found { labels, explored: s.explored })
}
