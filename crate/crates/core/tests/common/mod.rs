#![allow(dead_code, clippy::needless_range_loop)]

use ncsurf_core::construct::{Branch, BranchRef, Component, Construct, EdgeGluing, MarkRef};
use ncsurf_core::delta::{DeltaComplex2, Orientation, Side};
use ncsurf_core::lattice::{DivisorClass, IntersectionLattice};
use ncsurf_core::obstruction::ModuliPoint;
use ncsurf_core::{ratio, Rational};
use proptest::prelude::*;

/// Skeleton of a random construct: component count, gluing curves as
/// (tail, head) component pairs, and candidate triangles as three
/// (edge, positive) sides. Candidates whose corners do not close are dropped.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub components: usize,
    pub edges: Vec<(usize, usize)>,
    pub triangles: Vec<[(usize, bool); 3]>,
}

pub fn skeleton() -> impl Strategy<Value = Skeleton> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let edges = prop::collection::vec((0..n, 0..n), 0..=6);
            (Just(n), edges)
        })
        .prop_flat_map(|(n, edges)| {
            let ne = edges.len().max(1);
            let side = (0..ne, any::<bool>());
            let tris = prop::collection::vec([side.clone(), side.clone(), side], 0..=4);
            (Just(n), Just(edges), tris)
        })
        .prop_map(|(components, edges, triangles)| Skeleton { components, edges, triangles })
}

impl Skeleton {
    fn ends(&self, (e, positive): (usize, bool)) -> (usize, usize) {
        let (t, h) = self.edges[e];
        if positive {
            (t, h)
        } else {
            (h, t)
        }
    }

    pub fn closed_triangles(&self) -> Vec<[(usize, bool); 3]> {
        if self.edges.is_empty() {
            return vec![];
        }
        self.triangles
            .iter()
            .filter(|t| (0..3).all(|k| self.ends(t[k]).1 == self.ends(t[(k + 1) % 3]).0))
            .copied()
            .collect()
    }

    /// Planes carrying one line per gluing side; every triangle gets fresh
    /// marks, one gluing pair per side and one sheet per corner.
    pub fn build(&self) -> Construct {
        let mut components: Vec<Component> = (0..self.components)
            .map(|i| Component {
                name: format!("V{i}"),
                lattice: IntersectionLattice::blown_up_plane(0),
                branches: vec![],
            })
            .collect();
        let mut gluings = Vec::new();
        for &(t, h) in &self.edges {
            let mut add = |c: usize| {
                let b = components[c].branches.len();
                components[c].branches.push(Branch { class: DivisorClass(vec![1]), nodes: 0, marks: vec![] });
                BranchRef { component: c, branch: b }
            };
            let from = add(t);
            let to = add(h);
            gluings.push(EdgeGluing { from, to, map: vec![] });
        }
        let mut identifications = Vec::new();
        for (ti, tri) in self.closed_triangles().iter().enumerate() {
            // (start mark, end mark) of each side
            let mut ends: Vec<(MarkRef, MarkRef)> = Vec::new();
            for (k, &(e, positive)) in tri.iter().enumerate() {
                let g: &mut EdgeGluing = &mut gluings[e];
                let (fl, tl) = (format!("t{ti}s{k}f"), format!("t{ti}s{k}t"));
                components[g.from.component].branches[g.from.branch].marks.push(fl.clone());
                components[g.to.component].branches[g.to.branch].marks.push(tl.clone());
                g.map.push((fl.clone(), tl.clone()));
                let fm = MarkRef::new(g.from.component, g.from.branch, fl);
                let tm = MarkRef::new(g.to.component, g.to.branch, tl);
                ends.push(if positive { (fm, tm) } else { (tm, fm) });
            }
            for k in 0..3 {
                identifications.push(vec![ends[k].1.clone(), ends[(k + 1) % 3].0.clone()]);
            }
        }
        Construct::new(components, gluings, identifications, None).expect("generated construct is valid")
    }
}

/// Reads the image of `O(-x)` off the meromorphic section `(1, t)/(t - x)`
/// of the tautological bundle, in the frames `(1,0)`, `(1,1)` over `0, 1` and
/// `(0,1)` over `∞` (chart `s = 1/t`, where the section is `(s, 1)/(1 - xs)`).
pub fn sigma_oracle(x: &Rational) -> ModuliPoint<Rational> {
    let one = ratio::<Rational>(1, 1);
    let zero = ratio::<Rational>(0, 1);
    let section = |t: &Rational| -> [Rational; 2] {
        let d = t.clone() - x.clone();
        [one.clone() / d.clone(), t.clone() / d]
    };
    // coefficient of v along a frame vector w, with v parallel to w
    let along = |v: [Rational; 2], w: [Rational; 2]| -> Rational {
        assert_eq!(v[0].clone() * w[1].clone(), v[1].clone() * w[0].clone(), "section leaves the fiber line");
        if w[0] != zero {
            v[0].clone() / w[0].clone()
        } else {
            v[1].clone() / w[1].clone()
        }
    };
    let a = along(section(&zero), [one.clone(), zero.clone()]);
    let b = along(section(&one), [one.clone(), one.clone()]);
    let s = zero.clone();
    let at_infinity = [s.clone() / (one.clone() - x.clone() * s.clone()), one.clone() / (one.clone() - x.clone() * s)];
    let c = along(at_infinity, [zero.clone(), one.clone()]);
    ModuliPoint::new(a, b, c).expect("nonzero")
}

/// A connected simplicial complex on `n` vertices: the path `v0 - v1 - ...`
/// plus the given 3-subsets and extra edges, with edges `e{i}{j}` oriented
/// from the smaller index.
pub fn simplicial(n: usize, triangles: &[[usize; 3]], extra_edges: &[(usize, usize)]) -> DeltaComplex2 {
    use std::collections::BTreeSet;
    let mut edges: BTreeSet<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let mut tris = BTreeSet::new();
    for t in triangles {
        let mut t = t.map(|v| v % n);
        t.sort();
        if t[0] == t[1] || t[1] == t[2] {
            continue;
        }
        tris.insert(t);
        edges.extend([(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]);
    }
    for &(a, b) in extra_edges {
        let (a, b) = (a % n, b % n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let name = |a: usize, b: usize| format!("e{a}{b}");
    let mut c = DeltaComplex2::new();
    for v in 0..n {
        c.add_vertex(format!("v{v}"));
    }
    for &(a, b) in &edges {
        c.add_edge(name(a, b), format!("v{a}"), format!("v{b}"));
    }
    for (i, [a, b, d]) in tris.iter().copied().enumerate() {
        c.add_triangle(
            format!("t{i}"),
            [
                Side::new(name(a, b), Orientation::Plus),
                Side::new(name(b, d), Orientation::Plus),
                Side::new(name(a, d), Orientation::Minus),
            ],
        );
    }
    c
}

pub fn small_complex() -> impl Strategy<Value = DeltaComplex2> {
    (2usize..=5).prop_flat_map(|n| {
        let tris = prop::collection::vec([0..n, 0..n, 0..n], 0..=5);
        let extra = prop::collection::vec((0..n, 0..n), 0..=4);
        (Just(n), tris, extra).prop_map(|(n, t, e)| simplicial(n, &t, &e))
    })
}

/// A unimodular integer matrix as a product of elementary moves:
/// `(i, j, k, flip)` adds `k` times row `j` to row `i` (i ≠ j) and optionally
/// negates row `i`.
pub fn unimodular(n: usize, moves: &[(usize, usize, i64, bool)]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for &(i, j, k, flip) in moves {
        let (i, j) = (i % n, j % n);
        if i != j {
            for c in 0..n {
                a[i][c] += k * a[j][c];
            }
        }
        if flip {
            for c in 0..n {
                a[i][c] = -a[i][c];
            }
        }
    }
    a
}

pub fn symmetric(n: usize, entries: &[i64]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i..n {
            let v = *it.next().expect("nonempty");
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

pub fn congruent(m: &[Vec<i64>], a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    out[i][j] += a[k][i] * m[k][l] * a[l][j];
                }
            }
        }
    }
    out
}
