use crate::rational::Rational;

use super::{axpy, dense_from_sparse, rref_rows, sparse_from_dense, LinalgError, RatMatrix, SparseVec};
use super::DEFAULT_DENSE_THRESHOLD;

/// A linear subspace of `Q^n`, stored as the nonzero rows of a reduced row
/// echelon form. Two bases of the same subspace compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            rows: (0..ambient_dim).map(|i| vec![(i, Rational::one())]).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the given vectors; dependent or zero vectors are dropped.
    pub fn from_vectors(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut sparse = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::DimensionMismatch { expected: ambient_dim, found: v.len() });
            }
            sparse.push(sparse_from_dense(v));
        }
        Ok(Self::from_sparse(ambient_dim, sparse))
    }

    pub(crate) fn from_sparse(ambient_dim: usize, vectors: Vec<SparseVec>) -> Self {
        let m = RatMatrix::from_sparse_rows(ambient_dim, vectors);
        let (rows, pivots) = rref_rows(&m, DEFAULT_DENSE_THRESHOLD);
        SubspaceBasis { ambient_dim, rows, pivots }
    }

    /// Row space of a matrix.
    pub fn row_space(m: &RatMatrix) -> Self {
        let (rows, pivots) = rref_rows(m, DEFAULT_DENSE_THRESHOLD);
        SubspaceBasis { ambient_dim: m.cols(), rows, pivots }
    }

    /// Column space (image) of a matrix.
    pub fn column_space(m: &RatMatrix) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn sparse_vectors(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| dense_from_sparse(self.ambient_dim, r)).collect()
    }

    /// Coordinates not occupied by a pivot; the standard basis vectors at
    /// these positions span a canonical complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&i| !is_pivot[i]).collect()
    }

    fn remainder_sparse(&self, v: SparseVec) -> SparseVec {
        let mut v = v;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Ok(pos) = v.binary_search_by_key(&p, |(i, _)| *i) {
                let c = v[pos].1.clone();
                v = axpy(&v, &-c, row);
            }
        }
        v
    }

    /// `v` minus its component along the basis; zero exactly on members.
    pub fn remainder(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient_dim, "ambient dimension mismatch");
        dense_from_sparse(self.ambient_dim, &self.remainder_sparse(sparse_from_dense(v)))
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.ambient_dim && self.remainder_sparse(sparse_from_dense(v)).is_empty()
    }

    /// Coefficients of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.rows.iter().all(|r| other.remainder_sparse(r.clone()).is_empty())
    }

    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Self::from_sparse(self.ambient_dim, rows))
    }

    /// Matrix whose rows are the basis vectors.
    pub fn to_matrix(&self) -> RatMatrix {
        RatMatrix::from_sparse_rows(self.ambient_dim, self.rows.clone())
    }
}
