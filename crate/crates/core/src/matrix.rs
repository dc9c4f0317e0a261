//! Dense matrices over a [`Scalar`], with the handful of exact operations the
//! crate needs: rank, null space, and congruence diagonalization of
//! symmetric forms.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Signature of a symmetric form: counts of positive, negative and zero
/// diagonal entries after congruence diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("ragged input: row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
}

fn magnitude<S: Scalar>(x: &S) -> S {
    if *x < S::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged { row: i, len: row.len(), expected: cols });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_negligible)
    }

    pub fn check_symmetric(&self) -> Result<(), MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if !(self[(i, j)].clone() - self[(j, i)].clone()).is_negligible() {
                    return Err(MatrixError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // largest magnitude keeps the float instantiation honest
            let best = (r..self.rows).filter(|&i| !self[(i, c)].is_negligible()).max_by(|&a, &b| {
                magnitude(&self[(a, c)]).partial_cmp(&magnitude(&self[(b, c)])).unwrap_or(std::cmp::Ordering::Equal)
            });
            let Some(p) = best else { continue };
            self.swap_rows(r, p);
            let inv = S::one() / self[(r, c)].clone();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_negligible() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(r, j)].clone() * f.clone();
                    self[(i, j)] = self[(i, j)].clone() - v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Diagonal of a matrix congruent to `self` (`D = Pᵀ M P`, `P` invertible).
    ///
    /// Zero pivots are resolved with the symmetric exchange: when the whole
    /// remaining diagonal vanishes but some `m_ij` does not, adding row and
    /// column `j` to row and column `i` puts `2 m_ij` on the diagonal.
    pub fn congruence_diagonal(&self) -> Result<Vec<S>, MatrixError> {
        self.check_symmetric()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            let pivot = (k..n).find(|&p| !a[(p, p)].is_negligible());
            let p = match pivot {
                Some(p) => p,
                None => {
                    let off = (k..n)
                        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                        .find(|&(i, j)| !a[(i, j)].is_negligible());
                    let Some((i, j)) = off else {
                        diag.extend((k..n).map(|_| S::zero()));
                        return Ok(diag);
                    };
                    for c in 0..n {
                        let v = a[(j, c)].clone();
                        a[(i, c)] = a[(i, c)].clone() + v;
                    }
                    for r in 0..n {
                        let v = a[(r, j)].clone();
                        a[(r, i)] = a[(r, i)].clone() + v;
                    }
                    i
                }
            };
            a.swap_rows(k, p);
            a.swap_cols(k, p);
            let d = a[(k, k)].clone();
            for r in (k + 1)..n {
                if a[(r, k)].is_negligible() {
                    continue;
                }
                let f = a[(r, k)].clone() / d.clone();
                for c in k..n {
                    let v = a[(k, c)].clone() * f.clone();
                    a[(r, c)] = a[(r, c)].clone() - v;
                }
                for rr in k..n {
                    let v = a[(rr, k)].clone() * f.clone();
                    a[(rr, r)] = a[(rr, r)].clone() - v;
                }
            }
            diag.push(d);
        }
        Ok(diag)
    }

    pub fn inertia(&self) -> Result<Inertia, MatrixError> {
        let diag = self.congruence_diagonal()?;
        let positive = diag.iter().filter(|d| d.is_positive_strict()).count();
        let negative = diag.iter().filter(|d| d.is_negative_strict()).count();
        Ok(Inertia { positive, negative, zero: diag.len() - positive - negative })
    }

    /// Number of positive eigenvalues, computed without eigenvalues.
    pub fn positive_inertia(&self) -> Result<usize, MatrixError> {
        self.inertia().map(|i| i.positive)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = self[(i, k)].clone() * rhs[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + v;
                }
            }
        }
        out
    }
}

impl<S: fmt::Display> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_rational::Ratio;

    fn q(rows: &[Vec<i64>]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(q(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(q(&[vec![0, 0], vec![0, 0]]).rank(), 0);
        assert_eq!(q(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]).rank(), 2);
        assert_eq!(Matrix::<Rational>::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn null_space_spans_kernel() {
        let m = q(&[vec![1, 1, 1], vec![0, 1, 2]]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 1);
        for v in ns {
            for i in 0..m.rows() {
                let s = (0..3).fold(Rational::from_i64(0), |acc, j| acc + m[(i, j)].clone() * v[j].clone());
                assert!(s.is_negligible());
            }
        }
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(q(&[vec![1, 1], vec![1, 0]]).positive_inertia().unwrap(), 1);
        assert_eq!(q(&[vec![1, 0], vec![0, 1]]).positive_inertia().unwrap(), 2);
        assert_eq!(q(&[vec![-2, 0], vec![0, -1]]).positive_inertia().unwrap(), 0);
    }

    #[test]
    fn zero_diagonal_exchange() {
        let m = q(&[vec![0, 1], vec![1, 0]]);
        let i = m.inertia().unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let m = q(&[vec![0, 0, 0], vec![0, 0, 3], vec![0, 3, 0]]);
        let i = m.inertia().unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 1));
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = q(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(m.positive_inertia(), Err(MatrixError::NotSymmetric { row: 0, col: 1 }));
        let m = q(&[vec![1, 2]]);
        assert!(matches!(m.positive_inertia(), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn float_and_machine_rational_instantiations_agree() {
        let rows = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, -3]];
        let exact = q(&rows).inertia().unwrap();
        let float = Matrix::<f64>::from_i64_rows(&rows).unwrap().inertia().unwrap();
        let small = Matrix::<Ratio<i64>>::from_i64_rows(&rows).unwrap().inertia().unwrap();
        assert_eq!(exact, float);
        assert_eq!(exact, small);
        assert_eq!(exact.positive, 2);
    }
}
