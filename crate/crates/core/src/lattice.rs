//! Integral intersection forms of rational surfaces.
//!
//! The plane blown up in `n` points has basis `H, E1, ..., En` with Gram
//! matrix `diag(1, -1, ..., -1)` and canonical class `-3H + E1 + ... + En`.
//! Arbitrary symmetric integer forms are also accepted; the Riemann–Roch style
//! formulas (`chi_tangent`, `euler_surface`) are only defined on plane
//! blow-ups.

use std::fmt;

use serde::Serialize;

use crate::matrix::{Matrix, MatrixError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(v: Vec<i64>) -> Self {
        DivisorClass(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("class has {got} coefficients, lattice rank is {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix is not square of size {expected}")]
    BadShape { expected: usize },
    #[error("lattice is not a blow-up of the plane")]
    NotPlaneBlowup,
    #[error("negative node count {0}")]
    NegativeNodes(i64),
    #[error("intersection number overflows 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionLattice {
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
    canonical: Vec<i64>,
    blowups: Option<usize>,
}

impl IntersectionLattice {
    pub fn blown_up_plane(n: usize) -> Self {
        let rank = n + 1;
        let mut gram = vec![vec![0; rank]; rank];
        gram[0][0] = 1;
        for (i, row) in gram.iter_mut().enumerate().skip(1) {
            row[i] = -1;
        }
        let mut canonical = vec![1; rank];
        canonical[0] = -3;
        let labels = std::iter::once("H".to_string()).chain((1..=n).map(|i| format!("E{i}"))).collect();
        IntersectionLattice { labels, gram, canonical, blowups: Some(n) }
    }

    /// A lattice from an explicit symmetric Gram matrix. It is recognised as a
    /// plane blow-up when it literally has that basis form.
    pub fn from_gram(labels: Vec<String>, gram: Vec<Vec<i64>>, canonical: Vec<i64>) -> Result<Self, LatticeError> {
        let rank = labels.len();
        if gram.len() != rank || gram.iter().any(|r| r.len() != rank) {
            return Err(LatticeError::BadShape { expected: rank });
        }
        if canonical.len() != rank {
            return Err(LatticeError::SizeMismatch { expected: rank, got: canonical.len() });
        }
        for (i, row) in gram.iter().enumerate() {
            if let Some(j) = (i + 1..rank).find(|&j| row[j] != gram[j][i]) {
                return Err(LatticeError::NotSymmetric { row: i, col: j });
            }
        }
        let mut lattice = IntersectionLattice { labels, gram, canonical, blowups: None };
        if rank > 0 {
            let candidate = Self::blown_up_plane(rank - 1);
            if candidate.gram == lattice.gram && candidate.canonical == lattice.canonical {
                lattice.blowups = Some(rank - 1);
            }
        }
        Ok(lattice)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn blowup_count(&self) -> Option<usize> {
        self.blowups
    }

    pub fn is_plane_blowup(&self) -> bool {
        self.blowups.is_some()
    }

    pub fn canonical_class(&self) -> DivisorClass {
        DivisorClass(self.canonical.clone())
    }

    pub fn basis_vector(&self, i: usize) -> DivisorClass {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        DivisorClass(v)
    }

    /// `d·H − E1 − ... − Ek` on a plane blow-up (missing exceptionals get 0).
    pub fn plane_curve(&self, degree: i64, through: &[usize]) -> DivisorClass {
        let mut v = vec![0; self.rank()];
        v[0] = degree;
        for &i in through {
            v[i] = -1;
        }
        DivisorClass(v)
    }

    fn check(&self, c: &DivisorClass) -> Result<(), LatticeError> {
        if c.len() != self.rank() {
            return Err(LatticeError::SizeMismatch { expected: self.rank(), got: c.len() });
        }
        Ok(())
    }

    /// `aᵀ · G · b`.
    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        let mut s = 0i64;
        for (i, ai) in a.0.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                let term = ai.checked_mul(self.gram[i][j]).and_then(|x| x.checked_mul(*bj));
                s = term.and_then(|t| s.checked_add(t)).ok_or(LatticeError::Overflow)?;
            }
        }
        Ok(s)
    }

    pub fn self_intersection(&self, c: &DivisorClass) -> Result<i64, LatticeError> {
        self.intersect(c, c)
    }

    /// Degree of the normal bundle of the normalization of an immersed curve
    /// with `nodes` simple nodes: `c·c − 2·nodes`.
    pub fn normal_degree_immersed(&self, c: &DivisorClass, nodes: i64) -> Result<i64, LatticeError> {
        if nodes < 0 {
            return Err(LatticeError::NegativeNodes(nodes));
        }
        nodes.checked_mul(2).and_then(|n| self.self_intersection(c).ok()?.checked_sub(n)).ok_or(LatticeError::Overflow)
    }

    /// `χ(T) = 2K² − 10` for a rational surface.
    pub fn chi_tangent(&self) -> Result<i64, LatticeError> {
        if !self.is_plane_blowup() {
            return Err(LatticeError::NotPlaneBlowup);
        }
        let k = self.canonical_class();
        Ok(2 * self.self_intersection(&k)? - 10)
    }

    /// Topological Euler characteristic, `3 + n`.
    pub fn euler_surface(&self) -> Result<i64, LatticeError> {
        self.blowups.map(|n| 3 + n as i64).ok_or(LatticeError::NotPlaneBlowup)
    }

    /// The Gram matrix as an exact symmetric matrix.
    pub fn gram_matrix<S: Scalar>(&self) -> Matrix<S> {
        Matrix::from_i64_rows(&self.gram).expect("square by construction")
    }
}

/// `χ(O(d)) = d + 1` on a smooth rational curve.
pub fn chi_line_bundle_p1(degree: i64) -> i64 {
    degree + 1
}

/// Number of positive eigenvalues of a symmetric matrix, by exact
/// congruence diagonalization.
pub fn positive_inertia<S: Scalar>(m: &Matrix<S>) -> Result<usize, MatrixError> {
    m.positive_inertia()
}
