//! Exact linear algebra over the rationals.
//!
//! Elimination runs on sparse rows; matrices with at most
//! [`DEFAULT_DENSE_THRESHOLD`] columns take a dense Gauss-Jordan path.
//! Both paths return the same canonical reduced row echelon form.

mod matrix;
mod nilpotent;
mod subspace;

use thiserror::Error;

use crate::rational::Rational;

pub use matrix::RatMatrix;
pub use nilpotent::{is_nilpotent_matrix, nilpotent_jordan_blocks, power_ranks};
pub use subspace::SubspaceBasis;

/// Sorted `(index, value)` pairs with no zero values.
pub type SparseVec = Vec<(usize, Rational)>;

pub const DEFAULT_DENSE_THRESHOLD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("entry ({row},{col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is singular")]
    Singular,
}

/// `a + factor * b` on sorted sparse vectors.
pub(crate) fn axpy(a: &[(usize, Rational)], factor: &Rational, b: &[(usize, Rational)]) -> SparseVec {
    if factor.is_zero() || b.is_empty() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, factor * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(factor * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn dense_from_sparse(len: usize, v: &[(usize, Rational)]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Incremental row echelon form. Pivot rows have leading coefficient 1 but
/// are not back-reduced until [`Echelon::into_rref`].
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    cols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseVec>,
}

impl Echelon {
    pub(crate) fn new(cols: usize) -> Self {
        Echelon { cols, pivot_row: vec![None; cols], rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns true when it increased the rank.
    pub(crate) fn insert(&mut self, row: SparseVec) -> bool {
        let mut row = row;
        loop {
            let Some((c, v)) = row.first().cloned() else {
                return false;
            };
            match self.pivot_row[c] {
                Some(p) => row = axpy(&row, &-v, &self.rows[p]),
                None => {
                    let inv = v.recip().expect("nonzero leading entry");
                    for entry in row.iter_mut() {
                        entry.1 = &entry.1 * &inv;
                    }
                    self.pivot_row[c] = Some(self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
    }

    /// Back-substitutes into reduced row echelon form; rows come out sorted
    /// by pivot column.
    pub(crate) fn into_rref(self) -> (Vec<SparseVec>, Vec<usize>) {
        let pivots: Vec<usize> = (0..self.cols).filter(|&c| self.pivot_row[c].is_some()).collect();
        let mut reduced: Vec<Option<SparseVec>> = vec![None; self.cols];
        let mut rows: Vec<Option<SparseVec>> = self.rows.into_iter().map(Some).collect();
        for &p in pivots.iter().rev() {
            let idx = self.pivot_row[p].expect("pivot");
            let mut row = rows[idx].take().expect("row used once");
            let hits: Vec<(usize, Rational)> = row
                .iter()
                .filter(|(c, _)| *c != p && reduced[*c].is_some())
                .cloned()
                .collect();
            for (q, v) in hits {
                row = axpy(&row, &-v, reduced[q].as_ref().expect("reduced pivot row"));
            }
            reduced[p] = Some(row);
        }
        let out = pivots
            .iter()
            .map(|&p| reduced[p].take().expect("reduced row"))
            .collect();
        (out, pivots)
    }
}

fn dense_rref(m: &RatMatrix) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip().expect("nonzero pivot");
        for x in a[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                if a[r][j].is_zero() {
                    continue;
                }
                let delta = &f * &a[r][j];
                a[i][j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(pivots.len());
    (a, pivots)
}

fn sparse_echelon(m: &RatMatrix) -> Echelon {
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by_key(|&r| (m.row(r).len(), r));
    let mut ech = Echelon::new(m.cols());
    for r in order {
        if ech.rank() == m.cols() {
            break;
        }
        ech.insert(m.row(r).to_vec());
    }
    ech
}

/// Nonzero rows of the reduced row echelon form together with the pivot columns.
pub(crate) fn rref_rows(m: &RatMatrix, dense_threshold: usize) -> (Vec<SparseVec>, Vec<usize>) {
    if m.cols() <= dense_threshold {
        let (rows, pivots) = dense_rref(m);
        (rows.iter().map(|r| sparse_from_dense(r)).collect(), pivots)
    } else {
        sparse_echelon(m).into_rref()
    }
}

/// Reduced row echelon form (same shape as the input, zero rows last) and
/// the pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    rref_with_threshold(m, DEFAULT_DENSE_THRESHOLD)
}

pub fn rref_with_threshold(m: &RatMatrix, dense_threshold: usize) -> (RatMatrix, Vec<usize>) {
    let (mut rows, pivots) = rref_rows(m, dense_threshold);
    rows.resize(m.rows(), Vec::new());
    (RatMatrix::from_sparse_rows(m.cols(), rows), pivots)
}

pub fn rank(m: &RatMatrix) -> usize {
    if m.cols() <= DEFAULT_DENSE_THRESHOLD {
        dense_rref(m).1.len()
    } else {
        sparse_echelon(m).rank()
    }
}

/// Basis of the right null space `{v : m v = 0}`.
pub fn kernel_basis(m: &RatMatrix) -> SubspaceBasis {
    let n = m.cols();
    let (rows, pivots) = rref_rows(m, DEFAULT_DENSE_THRESHOLD);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // column f -> list of (pivot column, entry) in rref
    let mut by_col: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        for (c, v) in row {
            if *c != p {
                by_col[*c].push((p, v.clone()));
            }
        }
    }
    let vectors: Vec<SparseVec> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v: SparseVec = by_col[f].iter().map(|(p, x)| (*p, -x)).collect();
            v.push((f, Rational::one()));
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect();
    SubspaceBasis::from_sparse(n, vectors)
}

/// One solution of `m x = b`, with free variables set to zero, or `None`
/// when the system is inconsistent.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch { expected: m.rows(), found: b.len() });
    }
    let n = m.cols();
    let aug: Vec<SparseVec> = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r).to_vec();
            if !b[r].is_zero() {
                row.push((n, b[r].clone()));
            }
            row
        })
        .collect();
    let aug = RatMatrix::from_sparse_rows(n + 1, aug);
    let (rows, pivots) = rref_rows(&aug, DEFAULT_DENSE_THRESHOLD);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        if let Some((c, v)) = row.last() {
            if *c == n {
                x[p] = v.clone();
            }
        }
    }
    Ok(Some(x))
}

pub fn inverse(m: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let aug: Vec<SparseVec> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.push((n + r, Rational::one()));
            row
        })
        .collect();
    let (rows, pivots) = rref_rows(&RatMatrix::from_sparse_rows(2 * n, aug), DEFAULT_DENSE_THRESHOLD);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(LinalgError::Singular);
    }
    let data = rows
        .into_iter()
        .map(|row| row.into_iter().filter(|(c, _)| *c >= n).map(|(c, v)| (c - n, v)).collect())
        .collect();
    Ok(RatMatrix::from_sparse_rows(n, data))
}
