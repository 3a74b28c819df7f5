use std::collections::BTreeMap;
use std::fmt;

use crate::rational::Rational;

use super::{LinalgError, SparseVec};

/// Sparse rational matrix stored row-wise. Each row is sorted by column and
/// holds no explicit zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        RatMatrix { rows: n, cols: n, data }
    }

    pub fn from_dense(entries: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows);
        for (r, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::RaggedRows { row: r, expected: cols, found: row.len() });
            }
            data.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect(),
            );
        }
        Ok(RatMatrix { rows, cols, data })
    }

    /// Integer convenience constructor, mostly for tests.
    pub fn from_i64(entries: &[&[i64]]) -> Result<Self, LinalgError> {
        let dense: Vec<Vec<Rational>> = entries
            .iter()
            .map(|row| row.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect();
        Self::from_dense(&dense)
    }

    /// Accumulates `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfBounds { row: r, col: c, rows, cols });
            }
            *acc[r].entry(c).or_default() += v;
        }
        let data = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(RatMatrix { rows, cols, data })
    }

    /// Builds from sparse rows; rows must already be sorted, zero-free and in range.
    pub(crate) fn from_sparse_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(data.iter().flatten().all(|(c, v)| *c < cols && !v.is_zero()));
        RatMatrix { rows: data.len(), cols, data }
    }

    /// Matrix whose j-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut triplets = Vec::new();
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch { expected: rows, found: col.len() });
            }
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((r, c, v.clone()));
                }
            }
        }
        Self::from_triplets(rows, columns.len(), triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        match self.data[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(pos) => self.data[r][pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(k, _)| *k) {
            Ok(pos) if v.is_zero() => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = v,
            Err(_) if v.is_zero() => {}
            Err(pos) => row.insert(pos, (c, v)),
        }
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    /// Iterator over nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v.clone()));
        }
        RatMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for row in &self.data {
            acc.clear();
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    *acc.entry(*c).or_default() += a * b;
                }
            }
            data.push(
                std::mem::take(&mut acc)
                    .into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            );
        }
        Ok(RatMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, a)| a * &v[*c]).sum())
            .collect())
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        self.combine(other, &-Rational::one())
    }

    /// `self + factor * other`.
    pub fn combine(&self, other: &RatMatrix, factor: &Rational) -> Result<RatMatrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| super::axpy(a, factor, b))
            .collect();
        Ok(RatMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, factor: &Rational) -> RatMatrix {
        if factor.is_zero() {
            return RatMatrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v * factor)).collect())
            .collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, k: u32) -> Result<RatMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut acc = RatMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<Rational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
