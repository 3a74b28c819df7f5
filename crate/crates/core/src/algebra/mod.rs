//! Leibniz algebras given by structure constants.
//!
//! The bracket is the right Leibniz identity
//! `[x,[y,z]] = [[x,y],z] - [[x,z],y]`; right multiplications
//! `R_x : y -> [y,x]` are derivations.

mod ideals;
mod json;
mod series;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{LinalgError, RatMatrix, SparseVec};
use crate::rational::Rational;

pub use ideals::Quotient;
pub use json::{AlgebraJson, ProductJson, TableEntryJson};
pub use series::{SeriesKind, SeriesReport};

/// Default number of failing triples kept in an [`IdentityReport`].
pub const DEFAULT_DEFECT_CAP: usize = 50;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("expected {expected} basis labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate table entry for pair ({i},{j})")]
    DuplicatePair { i: usize, j: usize },
    #[error("duplicate target {k} in product ({i},{j})")]
    DuplicateTarget { i: usize, j: usize, k: usize },
    #[error("invalid number in product ({i},{j}) target {k}: {reason}")]
    InvalidNumber { i: usize, j: usize, k: usize, reason: String },
    #[error("Leibniz identity fails at basis triple {triple:?} ({failures} failing triples)")]
    NotLeibniz { triple: (usize, usize, usize), failures: usize },
    #[error("elements belong to different algebras")]
    MismatchedAlgebras,
    #[error("vector of length {found} does not fit an algebra of dimension {dim}")]
    WrongLength { dim: usize, found: usize },
    #[error("subspace is not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("subspace is not closed under the bracket: {0}")]
    NotASubalgebra(String),
    #[error("malformed algebra JSON at line {line}, column {column}: {message}")]
    Json { message: String, line: usize, column: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A finite-dimensional algebra over Q stored as a sparse table of basis
/// products `[e_i, e_j] = sum_k c_k e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizAlgebra {
    labels: Vec<String>,
    table: BTreeMap<(usize, usize), SparseVec>,
}

/// Accumulates structure constants before validation.
#[derive(Clone, Debug)]
pub struct TableBuilder {
    labels: Vec<String>,
    entries: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
}

impl TableBuilder {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        TableBuilder { labels: labels.into_iter().map(Into::into).collect(), entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Adds `coef * e_k` to `[e_i, e_j]`.
    pub fn add(&mut self, i: usize, j: usize, k: usize, coef: impl Into<Rational>) -> &mut Self {
        let coef = coef.into();
        let n = self.dim();
        assert!(i < n && j < n && k < n, "basis index out of range");
        if !coef.is_zero() {
            *self.entries.entry((i, j)).or_default().entry(k).or_default() += coef;
        }
        self
    }

    /// `[e_i, e_j] += coef e_k` and `[e_j, e_i] -= coef e_k`.
    pub fn add_antisymmetric(&mut self, i: usize, j: usize, k: usize, coef: impl Into<Rational>) -> &mut Self {
        let coef = coef.into();
        self.add(i, j, k, coef.clone());
        self.add(j, i, k, -coef)
    }

    fn finish(self) -> LeibnizAlgebra {
        let table = self
            .entries
            .into_iter()
            .filter_map(|(key, prod)| {
                let v: SparseVec = prod.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                (!v.is_empty()).then_some((key, v))
            })
            .collect();
        LeibnizAlgebra { labels: self.labels, table }
    }

    /// Validates the Leibniz identity.
    pub fn build(self) -> Result<LeibnizAlgebra, AlgebraError> {
        self.finish().validated()
    }

    /// Skips the identity check; for negative tests and intermediate objects.
    pub fn build_unchecked(self) -> LeibnizAlgebra {
        self.finish()
    }
}

/// One failing basis triple of the Leibniz identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityDefect {
    pub triple: (usize, usize, usize),
    /// `[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] + [[e_i,e_k],e_j]`
    pub defect: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub dim: usize,
    pub triples_checked: u64,
    pub failures: usize,
    pub defects: Vec<IdentityDefect>,
    pub truncated: bool,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// An element of a specific algebra.
#[derive(Clone, Debug)]
pub struct Element<'a> {
    algebra: &'a LeibnizAlgebra,
    coords: Vec<Rational>,
}

impl<'a> Element<'a> {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn algebra(&self) -> &'a LeibnizAlgebra {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    /// The bracket `[self, other]`.
    pub fn mul(&self, other: &Element<'a>) -> Result<Element<'a>, AlgebraError> {
        if !(std::ptr::eq(self.algebra, other.algebra) || self.algebra == other.algebra) {
            return Err(AlgebraError::MismatchedAlgebras);
        }
        Ok(Element { algebra: self.algebra, coords: self.algebra.bracket(&self.coords, &other.coords) })
    }
}

impl PartialEq for Element<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.coords == other.coords
    }
}

pub fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

impl LeibnizAlgebra {
    /// The zero product on `dim` basis vectors labelled `e1..`.
    pub fn abelian(dim: usize) -> Self {
        LeibnizAlgebra { labels: (1..=dim).map(|i| format!("e{i}")).collect(), table: BTreeMap::new() }
    }

    fn validated(self) -> Result<Self, AlgebraError> {
        let report = self.check_identity_capped(Some(1));
        match report.defects.first() {
            None => Ok(self),
            Some(d) => Err(AlgebraError::NotLeibniz { triple: d.triple, failures: report.failures }),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Copy with new labels; the table is unchanged.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.dim() {
            return Err(AlgebraError::LabelCount { expected: self.dim(), found: labels.len() });
        }
        Ok(LeibnizAlgebra { labels, table: self.table.clone() })
    }

    /// `[e_i, e_j]` as a sparse vector (empty when zero).
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        self.table.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    /// Nonzero basis products in `(i, j)` order.
    pub fn products(&self) -> impl Iterator<Item = ((usize, usize), &[(usize, Rational)])> {
        self.table.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn nonzero_products(&self) -> usize {
        self.table.len()
    }

    pub fn element(&self, coords: Vec<Rational>) -> Result<Element<'_>, AlgebraError> {
        if coords.len() != self.dim() {
            return Err(AlgebraError::WrongLength { dim: self.dim(), found: coords.len() });
        }
        Ok(Element { algebra: self, coords })
    }

    pub fn basis_element(&self, i: usize) -> Element<'_> {
        Element { algebra: self, coords: unit(self.dim(), i) }
    }

    /// Bilinear extension of the table. Panics on length mismatch; use
    /// [`Element::mul`] for checked multiplication.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        assert!(x.len() == n && y.len() == n, "vector length does not match dimension {n}");
        let mut out = vec![Rational::zero(); n];
        for ((i, j), prod) in &self.table {
            if x[*i].is_zero() || y[*j].is_zero() {
                continue;
            }
            let c = &x[*i] * &y[*j];
            for (k, v) in prod {
                out[*k] += &c * v;
            }
        }
        out
    }

    /// `[e_i, v]` for a sparse `v`, accumulated into `out` with weight `w`.
    fn add_left_basis(&self, i: usize, v: &[Rational], w: &Rational, out: &mut [Rational]) {
        for (u, vu) in v.iter().enumerate() {
            if vu.is_zero() {
                continue;
            }
            let c = w * vu;
            for (k, p) in self.product(i, u) {
                out[*k] += &c * p;
            }
        }
    }

    /// `[v, e_j]` accumulated into `out` with weight `w`.
    fn add_right_basis(&self, v: &[Rational], j: usize, w: &Rational, out: &mut [Rational]) {
        for (u, vu) in v.iter().enumerate() {
            if vu.is_zero() {
                continue;
            }
            let c = w * vu;
            for (k, p) in self.product(u, j) {
                out[*k] += &c * p;
            }
        }
    }

    fn product_dense(&self, i: usize, j: usize) -> Vec<Rational> {
        crate::linalg::dense_from_sparse(self.dim(), self.product(i, j))
    }

    /// Leibniz-identity defect on one basis triple.
    pub fn identity_defect(&self, i: usize, j: usize, k: usize) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        let one = Rational::one();
        let minus = -Rational::one();
        self.add_left_basis(i, &self.product_dense(j, k), &one, &mut out);
        self.add_right_basis(&self.product_dense(i, j), k, &minus, &mut out);
        self.add_right_basis(&self.product_dense(i, k), j, &one, &mut out);
        out
    }

    /// Evaluates the Leibniz identity on every basis triple, keeping at most
    /// [`DEFAULT_DEFECT_CAP`] failures.
    pub fn check_identity(&self) -> IdentityReport {
        self.check_identity_capped(Some(DEFAULT_DEFECT_CAP))
    }

    /// As [`Self::check_identity`]; `None` keeps every failure.
    pub fn check_identity_capped(&self, cap: Option<usize>) -> IdentityReport {
        let n = self.dim();
        let mut defects = Vec::new();
        let mut failures = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let d = self.identity_defect(i, j, k);
                    if d.iter().any(|x| !x.is_zero()) {
                        failures += 1;
                        if cap.is_none_or(|c| defects.len() < c) {
                            defects.push(IdentityDefect { triple: (i, j, k), defect: d });
                        }
                    }
                }
            }
        }
        IdentityReport {
            dim: n,
            triples_checked: (n as u64).pow(3),
            failures,
            truncated: failures > defects.len(),
            defects,
        }
    }

    /// Antisymmetric on the basis (which, with the Leibniz identity, makes it Lie).
    pub fn is_lie(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (i..n).all(|j| {
                let a = self.product(i, j);
                let b = self.product(j, i);
                a.len() == b.len() && a.iter().zip(b).all(|((ka, va), (kb, vb))| ka == kb && *va == -vb)
            })
        })
    }

    /// Matrix of `y -> [y, x]`; column `j` holds `[e_j, x]`.
    pub fn right_mult_matrix(&self, x: &[Rational]) -> RatMatrix {
        let n = self.dim();
        let cols: Vec<Vec<Rational>> = (0..n).map(|j| self.bracket(&unit(n, j), x)).collect();
        RatMatrix::from_columns(n, &cols).expect("square by construction")
    }

    /// Matrix of `y -> [x, y]`.
    pub fn left_mult_matrix(&self, x: &[Rational]) -> RatMatrix {
        let n = self.dim();
        let cols: Vec<Vec<Rational>> = (0..n).map(|j| self.bracket(x, &unit(n, j))).collect();
        RatMatrix::from_columns(n, &cols).expect("square by construction")
    }

    pub fn right_mult_basis(&self, i: usize) -> RatMatrix {
        self.right_mult_matrix(&unit(self.dim(), i))
    }

    pub fn left_mult_basis(&self, i: usize) -> RatMatrix {
        self.left_mult_matrix(&unit(self.dim(), i))
    }

    /// Structure constants as a dense `dim x dim x dim` array, for table
    /// comparisons independent of labels.
    pub fn dense_table(&self) -> Vec<Vec<Vec<Rational>>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.product_dense(i, j)).collect()).collect()
    }

    /// True when both algebras have identical structure constants in their
    /// given bases (labels ignored).
    pub fn same_table(&self, other: &LeibnizAlgebra) -> bool {
        self.dim() == other.dim() && self.table == other.table
    }
}
