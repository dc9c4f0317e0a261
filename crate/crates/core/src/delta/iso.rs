//! Brute-force isomorphism for small Δ-complexes.

use std::collections::HashMap;

use super::{DeltaComplex2, DeltaError, Orientation};

const LIMIT: usize = 8;

struct Flat {
    nv: usize,
    edges: Vec<(usize, usize)>,
    tris: Vec<[(usize, Orientation); 3]>,
}

impl Flat {
    fn new(c: &DeltaComplex2) -> Self {
        let vidx: HashMap<&str, usize> = c.vertices().iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let eidx: HashMap<&str, usize> = c.edges().iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        Flat {
            nv: c.vertices().len(),
            edges: c.edges().iter().map(|e| (vidx[e.tail.as_str()], vidx[e.head.as_str()])).collect(),
            tris: c
                .triangles()
                .iter()
                .map(|t| t.sides.clone().map(|s| (eidx[s.edge.as_str()], s.orientation)))
                .collect(),
        }
    }
}

/// The six words describing the same triangle: three rotations of the side
/// word and three rotations of its reversal with flipped orientations.
fn dihedral(word: &[(usize, Orientation); 3]) -> [[(usize, Orientation); 3]; 6] {
    let rev = [2, 1, 0].map(|i| (word[i].0, word[i].1.flipped()));
    let rot = |w: &[(usize, Orientation); 3], r: usize| [w[r % 3], w[(r + 1) % 3], w[(r + 2) % 3]];
    [rot(word, 0), rot(word, 1), rot(word, 2), rot(&rev, 0), rot(&rev, 1), rot(&rev, 2)]
}

struct Matcher<'a> {
    a: &'a Flat,
    b: &'a Flat,
    vmap: Vec<Option<usize>>,
    vused: Vec<bool>,
    emap: Vec<(usize, bool)>,
    eused: Vec<bool>,
}

impl Matcher<'_> {
    fn bind(&mut self, va: usize, vb: usize, undo: &mut Vec<usize>) -> bool {
        match self.vmap[va] {
            Some(x) => x == vb,
            None if self.vused[vb] => false,
            None => {
                self.vmap[va] = Some(vb);
                self.vused[vb] = true;
                undo.push(va);
                true
            }
        }
    }

    fn unbind(&mut self, undo: Vec<usize>) {
        for va in undo {
            let vb = self.vmap[va].take().expect("bound");
            self.vused[vb] = false;
        }
    }

    fn edges(&mut self, i: usize) -> bool {
        if i == self.a.edges.len() {
            return self.triangles();
        }
        let (ta, ha) = self.a.edges[i];
        for j in 0..self.b.edges.len() {
            if self.eused[j] {
                continue;
            }
            let (tb, hb) = self.b.edges[j];
            for flip in [false, true] {
                let (t, h) = if flip { (hb, tb) } else { (tb, hb) };
                let mut undo = Vec::new();
                if self.bind(ta, t, &mut undo) && self.bind(ha, h, &mut undo) {
                    self.eused[j] = true;
                    self.emap[i] = (j, flip);
                    if self.edges(i + 1) {
                        return true;
                    }
                    self.eused[j] = false;
                }
                self.unbind(undo);
            }
        }
        false
    }

    fn triangles(&self) -> bool {
        let mapped: Vec<[(usize, Orientation); 3]> = self
            .a
            .tris
            .iter()
            .map(|w| {
                w.map(|(e, o)| {
                    let (j, flip) = self.emap[e];
                    (j, if flip { o.flipped() } else { o })
                })
            })
            .collect();
        let mut used = vec![false; self.b.tris.len()];
        fn assign(k: usize, mapped: &[[(usize, Orientation); 3]], b: &Flat, used: &mut [bool]) -> bool {
            if k == mapped.len() {
                return true;
            }
            for j in 0..b.tris.len() {
                if used[j] || !dihedral(&b.tris[j]).contains(&mapped[k]) {
                    continue;
                }
                used[j] = true;
                if assign(k + 1, mapped, b, used) {
                    return true;
                }
                used[j] = false;
            }
            false
        }
        assign(0, &mapped, self.b, &mut used)
    }
}

pub(super) fn is_isomorphic(a: &DeltaComplex2, b: &DeltaComplex2) -> Result<bool, DeltaError> {
    for c in [a, b] {
        let report = c.validate();
        if !report.is_ok() {
            return Err(DeltaError::Invalid(report));
        }
        let (v, e, t) = c.counts();
        if v.max(e).max(t) > LIMIT {
            return Err(DeltaError::TooLarge { limit: LIMIT });
        }
    }
    if a.counts() != b.counts() {
        return Ok(false);
    }
    let (fa, fb) = (Flat::new(a), Flat::new(b));
    let mut m = Matcher {
        a: &fa,
        b: &fb,
        vmap: vec![None; fa.nv],
        vused: vec![false; fb.nv],
        emap: vec![(0, false); fa.edges.len()],
        eused: vec![false; fb.edges.len()],
    };
    // isolated vertices match freely once the counts agree
    Ok(m.edges(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{disc, dunce_hat, torus, Side};
    use Orientation::{Minus, Plus};

    #[test]
    fn dunce_hat_patterns_agree() {
        let mut other = DeltaComplex2::new();
        other
            .add_vertex("x")
            .add_edge("loop", "x", "x")
            .add_triangle("tri", [Side::new("loop", Plus), Side::new("loop", Minus), Side::new("loop", Minus)]);
        assert!(dunce_hat().is_isomorphic(&other).unwrap());
    }

    #[test]
    fn coherent_triangle_is_not_a_dunce_hat() {
        // a a a: a different space (boundary word of the triple cover cone)
        let mut other = DeltaComplex2::new();
        other
            .add_vertex("x")
            .add_edge("l", "x", "x")
            .add_triangle("t", [Side::new("l", Plus), Side::new("l", Plus), Side::new("l", Plus)]);
        assert!(!dunce_hat().is_isomorphic(&other).unwrap());
    }

    #[test]
    fn renamed_disc_and_torus() {
        let mut d = DeltaComplex2::new();
        d.add_vertex("c").add_vertex("a").add_vertex("b");
        d.add_edge("x", "b", "a").add_edge("y", "c", "b").add_edge("z", "a", "c");
        d.add_triangle("T", [Side::new("x", Plus), Side::new("z", Plus), Side::new("y", Plus)]);
        assert!(disc().is_isomorphic(&d).unwrap());
        assert!(!disc().is_isomorphic(&torus()).unwrap());
        assert!(torus().is_isomorphic(&torus()).unwrap());
    }
}
