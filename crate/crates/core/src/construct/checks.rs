use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::{BranchRef, Construct};
use crate::delta::Betti;
use crate::lattice::LatticeError;
use crate::matrix::Matrix;
use crate::Rational;

/// What goes on the diagonal of a component's curve matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Diagonal {
    /// Self-intersection of the embedded curve.
    Embedded,
    /// Normal degree on the normalization (self-intersection minus twice the nodes).
    Normalized,
}

impl FromStr for Diagonal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "embedded" => Ok(Diagonal::Embedded),
            "normalized" => Ok(Diagonal::Normalized),
            other => Err(format!("unknown diagonal `{other}` (expected embedded or normalized)")),
        }
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagonal::Embedded => "embedded",
            Diagonal::Normalized => "normalized",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("component {component}: {source}")]
    Lattice { component: usize, source: LatticeError },
    #[error("dual complex has Betti numbers {0}, expected (1, 0, 0)")]
    NotPointLike(Betti),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeTripleReport {
    pub gluing: usize,
    pub from_degree: i64,
    pub to_degree: i64,
    pub triple_points: usize,
    pub sum: i64,
}

impl EdgeTripleReport {
    pub fn passed(&self) -> bool {
        self.sum == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexInertiaReport {
    pub component: usize,
    pub matrix: Vec<Vec<i64>>,
    pub positive_inertia: usize,
}

impl VertexInertiaReport {
    pub fn passed(&self) -> bool {
        self.positive_inertia <= 1
    }
}

/// Degree `2 - t` of the tangent bundle of a rational gluing curve twisted
/// down by its `t` triple points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GluingDegreeReport {
    pub gluing: usize,
    pub triple_points: usize,
    pub degree: i64,
}

impl GluingDegreeReport {
    pub fn passed(&self) -> bool {
        self.degree >= -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H11Report {
    pub h11: i64,
    pub smoothing_euler: i64,
    pub betti: Betti,
    pub assumption: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomologyRanks {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

impl CohomologyRanks {
    pub fn matches(&self, b: &Betti) -> bool {
        (self.h0, self.h1, self.h2) == (b.b0, b.b1, b.b2)
    }

    pub fn euler(&self) -> i64 {
        self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }
}

impl fmt::Display for CohomologyRanks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.h0, self.h1, self.h2)
    }
}

/// Arithmetic genus of a connected curve with `num_curves` smooth rational
/// components glued at points with the given preimage counts.
pub fn singular_locus_genus(num_curves: usize, preimage_counts: &[usize]) -> i64 {
    let glued: i64 = preimage_counts.iter().map(|&p| p as i64 - 1).sum();
    1 - (num_curves as i64 - glued)
}

impl Construct {
    fn normal_degree(&self, r: BranchRef) -> i64 {
        let b = self.branch(r);
        self.lattice(r.component).normal_degree_immersed(&b.class, b.nodes as i64).expect("validated class")
    }

    /// Triple points on each gluing curve, corners counted with multiplicity.
    pub fn triple_point_counts(&self) -> Vec<usize> {
        let mut t = vec![0; self.gluings.len()];
        for gs in &self.triple_germs {
            for g in gs {
                t[g.gluing] += 1;
            }
        }
        t
    }

    /// `deg N_from + deg N_to + t` on every gluing curve.
    pub fn triple_point_check(&self) -> Vec<EdgeTripleReport> {
        let t = self.triple_point_counts();
        self.gluings
            .iter()
            .enumerate()
            .map(|(g, gl)| {
                let (a, b) = (self.normal_degree(gl.from), self.normal_degree(gl.to));
                EdgeTripleReport {
                    gluing: g,
                    from_degree: a,
                    to_degree: b,
                    triple_points: t[g],
                    sum: a + b + t[g] as i64,
                }
            })
            .collect()
    }

    /// The intersection matrix of the curves on each component.
    pub fn combinatorial_check(&self, diagonal: Diagonal) -> Vec<VertexInertiaReport> {
        self.components
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                let n = comp.branches.len();
                let matrix: Vec<Vec<i64>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| match diagonal {
                                Diagonal::Normalized if i == j => {
                                    self.normal_degree(BranchRef { component: c, branch: i })
                                }
                                _ => {
                                    let (a, b) = (&comp.branches[i].class, &comp.branches[j].class);
                                    comp.lattice.intersect(a, b).expect("validated class")
                                }
                            })
                            .collect()
                    })
                    .collect();
                let m = Matrix::<Rational>::from_i64_rows(&matrix).expect("square");
                let positive_inertia = m.positive_inertia().expect("symmetric");
                VertexInertiaReport { component: c, matrix, positive_inertia }
            })
            .collect()
    }

    /// Euler characteristic of the curve configuration on a component: two
    /// per branch, minus one for each extra mark at a shared point.
    pub fn divisor_euler(&self, component: usize) -> i64 {
        let branches = self.components[component].branches.len() as i64;
        let merged: i64 =
            self.sheets.iter().filter(|s| s.component == component).map(|s| s.marks.len() as i64 - 1).sum();
        2 * branches - merged
    }

    /// Euler characteristic of a smoothing: each component contributes its
    /// own Euler characteristic minus that of its curve configuration.
    pub fn smoothing_euler(&self) -> Result<i64, CheckError> {
        let mut total = 0;
        for (c, comp) in self.components.iter().enumerate() {
            let e = comp.lattice.euler_surface().map_err(|source| CheckError::Lattice { component: c, source })?;
            total += e - self.divisor_euler(c);
        }
        Ok(total)
    }

    /// `h^{1,1}` of a smoothing, valid when its first Betti number vanishes.
    pub fn h11(&self) -> Result<H11Report, CheckError> {
        let betti = self.dual_complex().betti_numbers().expect("dual complex validates");
        if !betti.is_point_like() {
            return Err(CheckError::NotPointLike(betti));
        }
        let e = self.smoothing_euler()?;
        Ok(H11Report { h11: e - 2, smoothing_euler: e, betti, assumption: "b1 = 0 assumed for the smoothing" })
    }

    /// `-χ(T(-log D))`, summed over the components.
    pub fn expected_moduli_dim(&self) -> Result<i64, CheckError> {
        let mut total = 0;
        for (c, comp) in self.components.iter().enumerate() {
            let chi = comp.lattice.chi_tangent().map_err(|source| CheckError::Lattice { component: c, source })?;
            total -= chi;
            for b in 0..comp.branches.len() {
                total += self.normal_degree(BranchRef { component: c, branch: b }) + 1;
            }
        }
        Ok(total)
    }

    /// Dimension of the Picard variety of the singular locus: its first
    /// cohomology of the structure sheaf, summed over connected pieces.
    pub fn obstruction_moduli_dim(&self) -> i64 {
        let n = self.gluings.len();
        let mut uf = UnionFind::<usize>::new(n);
        let mut glued = 0i64;
        for class in &self.classes {
            if let Some(first) = class.germs.first() {
                for g in &class.germs[1..] {
                    uf.union(first.gluing, g.gluing);
                }
                glued += class.germs.len() as i64 - 1;
            }
        }
        let pieces = (0..n).filter(|&i| uf.find(i) == i).count() as i64;
        pieces - n as i64 + glued
    }

    pub fn dsemistable_expected_dim(&self) -> Result<i64, CheckError> {
        Ok(self.expected_moduli_dim()? - self.obstruction_moduli_dim())
    }

    pub fn gluing_unobstructed_check(&self) -> Vec<GluingDegreeReport> {
        self.triple_point_counts()
            .into_iter()
            .enumerate()
            .map(|(gluing, t)| GluingDegreeReport { gluing, triple_points: t, degree: 2 - t as i64 })
            .collect()
    }

    /// Ranks of the cochain complex components → gluing curves → triple
    /// points, built from incidences alone.
    pub fn structure_sheaf_cohomology(&self) -> CohomologyRanks {
        let (nc, ne, nt) = (self.components.len(), self.gluings.len(), self.triple_germs.len());
        let mut d0 = Matrix::<Rational>::zeros(ne, nc);
        for (e, gl) in self.gluings.iter().enumerate() {
            d0[(e, gl.to.component)] += Rational::from_integer(1.into());
            d0[(e, gl.from.component)] -= Rational::from_integer(1.into());
        }
        let mut d1 = Matrix::<Rational>::zeros(nt, ne);
        for (t, gs) in self.triple_germs.iter().enumerate() {
            let signs = self.cycle_signs(gs);
            for (g, s) in gs.iter().zip(signs) {
                d1[(t, g.gluing)] += Rational::from_integer(s.into());
            }
        }
        let (r0, r1) = (d0.rank(), d1.rank());
        CohomologyRanks { h0: nc - r0, h1: ne - r0 - r1, h2: nt - r1 }
    }

    /// Signs (first one positive) making the three gluing pairs at a triple
    /// point a closed cycle through its sheets.
    fn cycle_signs(&self, gs: &[super::Germ; 3]) -> [i64; 3] {
        let sheets: Vec<usize> = gs.iter().flat_map(|&g| self.germ_sheets(g)).collect();
        for s1 in [1, -1] {
            for s2 in [1, -1] {
                let eps = [1, s1, s2];
                let closed = sheets.iter().all(|&s| {
                    gs.iter()
                        .zip(eps)
                        .map(|(&g, e)| e * ((self.head_sheet(g) == s) as i64 - (self.tail_sheet(g) == s) as i64))
                        .sum::<i64>()
                        == 0
                });
                if closed {
                    return eps;
                }
            }
        }
        unreachable!("sheets of a triple point form a 3-cycle")
    }
}
