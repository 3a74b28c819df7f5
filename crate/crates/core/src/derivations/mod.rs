//! Derivations `d([x,y]) = [d(x),y] + [x,d(y)]`, inner derivations
//! `R_x : y -> [y,x]`, nil-independence and characteristic sequences.
//!
//! Operators are matrices with column `j` equal to `d(e_j)`. Flattened, the
//! entry for `e_t` in `d(e_j)` sits at index `j * n + t`.

mod charseq;
mod nil;
pub mod particular;

use thiserror::Error;

use crate::algebra::{unit, LeibnizAlgebra};
use crate::linalg::{kernel_basis, LinalgError, RatMatrix, SubspaceBasis};
use crate::rational::Rational;

pub use charseq::{characteristic_sequence, CharSequence, DEFAULT_CHARSEQ_SAMPLES};
pub use nil::{check_nil_independent, NilConfig, NilVerdict, DEFAULT_NIL_TRIALS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivationError {
    #[error("operator is {rows}x{cols}, expected {dim}x{dim}")]
    SizeMismatch { dim: usize, rows: usize, cols: usize },
    #[error("the set of operators is empty")]
    EmptySet,
    #[error("right multiplication by a sampled element is not nilpotent; the algebra is not nilpotent")]
    NotNilpotent,
    #[error("L^2 = L; no element outside the derived algebra")]
    PerfectAlgebra,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn flatten_operator(m: &RatMatrix) -> Vec<Rational> {
    let n = m.rows();
    let mut v = vec![Rational::zero(); n * m.cols()];
    for (t, j, c) in m.entries() {
        v[j * n + t] = c.clone();
    }
    v
}

/// Inverse of [`flatten_operator`] for an `n x n` operator.
pub fn unflatten_operator(n: usize, v: &[Rational]) -> RatMatrix {
    assert_eq!(v.len(), n * n, "flattened operator has wrong length");
    let triplets = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(idx, c)| (idx % n, idx / n, c.clone()));
    RatMatrix::from_triplets(n, n, triplets).expect("indices in range")
}

/// `Der(L)` as a subspace of flattened operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpace {
    n: usize,
    space: SubspaceBasis,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn subspace(&self) -> &SubspaceBasis {
        &self.space
    }

    pub fn basis(&self) -> Vec<RatMatrix> {
        self.space.vectors().iter().map(|v| unflatten_operator(self.n, v)).collect()
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        m.rows() == self.n && m.cols() == self.n && self.space.contains(&flatten_operator(m))
    }
}

/// Kernel of the linear system `d([e_i,e_j]) - [d(e_i),e_j] - [e_i,d(e_j)] = 0`.
pub fn derivation_space(l: &LeibnizAlgebra) -> DerivationSpace {
    let n = l.dim();
    let row = |i: usize, j: usize, s: usize| (i * n + j) * n + s;
    let var = |col: usize, t: usize| col * n + t;
    let mut triplets = Vec::new();
    for ((i, j), prod) in l.products() {
        // d([e_i, e_j]) = sum_k c_k d(e_k)
        for (k, c) in prod {
            for s in 0..n {
                triplets.push((row(i, j, s), var(*k, s), c.clone()));
            }
        }
    }
    for ((u, j), prod) in l.products() {
        // [d(e_i), e_j] picks up d(e_i)_u [e_u, e_j]
        for (s, c) in prod {
            for i in 0..n {
                triplets.push((row(i, j, *s), var(i, u), -c));
            }
        }
    }
    for ((i, u), prod) in l.products() {
        // [e_i, d(e_j)] picks up d(e_j)_u [e_i, e_u]
        for (s, c) in prod {
            for j in 0..n {
                triplets.push((row(i, j, *s), var(j, u), -c));
            }
        }
    }
    let system = RatMatrix::from_triplets(n * n * n, n * n, triplets).expect("indices in range");
    DerivationSpace { n, space: kernel_basis(&system) }
}

/// Span of the right multiplications `R_{e_i}`.
pub fn inner_derivations(l: &LeibnizAlgebra) -> SubspaceBasis {
    let n = l.dim();
    let ops: Vec<Vec<Rational>> = (0..n).map(|i| flatten_operator(&l.right_mult_basis(i))).collect();
    SubspaceBasis::from_vectors(n * n, &ops).expect("flattened length n^2")
}

fn check_square(l: &LeibnizAlgebra, m: &RatMatrix) -> Result<(), DerivationError> {
    let n = l.dim();
    if m.rows() != n || m.cols() != n {
        return Err(DerivationError::SizeMismatch { dim: n, rows: m.rows(), cols: m.cols() });
    }
    Ok(())
}

/// Evaluates the derivation law on every basis pair.
pub fn is_derivation(l: &LeibnizAlgebra, m: &RatMatrix) -> Result<bool, DerivationError> {
    check_square(l, m)?;
    let n = l.dim();
    let images: Vec<Vec<Rational>> = (0..n).map(|j| m.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = m.mul_vec(&l.bracket(&unit(n, i), &unit(n, j)))?;
            let a = l.bracket(&images[i], &unit(n, j));
            let b = l.bracket(&unit(n, i), &images[j]);
            if (0..n).any(|s| lhs[s] != &a[s] + &b[s]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
