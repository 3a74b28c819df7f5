//! Leibniz cohomology `HL^n(L, M)` from the Loday-Pirashvili complex
//! `CL^n = Hom(L^{(x)n}, M)`.
//!
//! Cochains are flattened row-major: the first argument varies slowest and
//! the module coordinate fastest, so `phi(e_{i1},..,e_{in})_t` sits at
//! `((i1 * a + i2) * a + ..) * m + t` for `a = dim L`, `m = dim M`.

mod complex;
mod prop;

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, LeibnizAlgebra};
use crate::constructions::ConstructionError;
use crate::linalg::{LinalgError, RatMatrix};
use crate::rational::Rational;

pub use complex::{
    coboundary, coboundary_matrix, coboundary_witness, cohomology_report, is_cohomologically_rigid, is_complete,
    CohomologyReport, CompletenessReport, RigidityReport,
};
pub use prop::{verify_prop111, PropItem, PropReport};

pub const DEFAULT_MAX_DEGREE: usize = 3;
pub const DEFAULT_MAX_CELLS: u128 = 100_000_000;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("degree {degree} exceeds the cap {max}; d^{degree} would be about {rows}x{cols}")]
    DegreeTooHigh { degree: usize, max: usize, rows: u128, cols: u128 },
    #[error("d^{degree} is {rows}x{cols} = {cells} cells, over the limit of {max_cells}")]
    TooLarge { degree: usize, rows: u128, cols: u128, cells: u128, max_cells: u128 },
    #[error("cochain does not match the module: expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("a coboundary witness needs degree at least 1")]
    DegreeZeroWitness,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Resource limits for assembling coboundary matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyConfig {
    pub max_degree: usize,
    /// Upper bound on `rows * cols` of any assembled `d^n`.
    pub max_cells: u128,
}

impl Default for CohomologyConfig {
    fn default() -> Self {
        CohomologyConfig { max_degree: DEFAULT_MAX_DEGREE, max_cells: DEFAULT_MAX_CELLS }
    }
}

/// `a^n * m`, saturating.
pub(crate) fn cochain_len(a: usize, m: usize, n: usize) -> u128 {
    let mut len = m as u128;
    for _ in 0..n {
        len = len.saturating_mul(a as u128);
    }
    len
}

impl CohomologyConfig {
    /// Checks that `d^degree` may be assembled.
    pub(crate) fn admit(&self, a: usize, m: usize, degree: usize) -> Result<(), CohomologyError> {
        let rows = cochain_len(a, m, degree + 1);
        let cols = cochain_len(a, m, degree);
        if degree > self.max_degree {
            return Err(CohomologyError::DegreeTooHigh { degree, max: self.max_degree, rows, cols });
        }
        let cells = rows.saturating_mul(cols);
        if cells > self.max_cells {
            return Err(CohomologyError::TooLarge { degree, rows, cols, cells, max_cells: self.max_cells });
        }
        Ok(())
    }
}

/// A bimodule over a Leibniz algebra: `left[i]` is `m -> [e_i, m]` and
/// `right[i]` is `m -> [m, e_i]`, both with column `j` the image of `m_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizModule {
    algebra: LeibnizAlgebra,
    dim: usize,
    left: Vec<RatMatrix>,
    right: Vec<RatMatrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleAxiomFailure {
    /// 1: `[m,[x,y]]`, 2: `[x,[m,y]]`, 3: `[x,[y,m]]`.
    pub axiom: u8,
    pub x: usize,
    pub y: usize,
}

impl LeibnizModule {
    pub fn new(
        algebra: LeibnizAlgebra,
        dim: usize,
        left: Vec<RatMatrix>,
        right: Vec<RatMatrix>,
    ) -> Result<Self, CohomologyError> {
        let a = algebra.dim();
        if left.len() != a || right.len() != a {
            return Err(CohomologyError::InvalidModule(format!(
                "expected {a} left and right actions, found {} and {}",
                left.len(),
                right.len()
            )));
        }
        if let Some(bad) = left.iter().chain(&right).find(|m| m.rows() != dim || m.cols() != dim) {
            return Err(CohomologyError::InvalidModule(format!(
                "action is {}x{}, expected {dim}x{dim}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(LeibnizModule { algebra, dim, left, right })
    }

    /// The algebra acting on itself by left and right multiplication.
    pub fn adjoint(l: &LeibnizAlgebra) -> Self {
        let n = l.dim();
        LeibnizModule {
            algebra: l.clone(),
            dim: n,
            left: (0..n).map(|i| l.left_mult_basis(i)).collect(),
            right: (0..n).map(|i| l.right_mult_basis(i)).collect(),
        }
    }

    /// `M = Q^dim` with zero actions.
    pub fn trivial(l: &LeibnizAlgebra, dim: usize) -> Self {
        let zero = RatMatrix::zeros(dim, dim);
        LeibnizModule { algebra: l.clone(), dim, left: vec![zero.clone(); l.dim()], right: vec![zero; l.dim()] }
    }

    pub fn algebra(&self) -> &LeibnizAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self, i: usize) -> &RatMatrix {
        &self.left[i]
    }

    pub fn right_action(&self, i: usize) -> &RatMatrix {
        &self.right[i]
    }

    fn combination(actions: &[RatMatrix], coeffs: &[(usize, Rational)], dim: usize) -> RatMatrix {
        coeffs.iter().fold(RatMatrix::zeros(dim, dim), |acc, (k, c)| {
            acc.combine(&actions[*k], c).expect("same shape")
        })
    }

    /// Evaluates the three module identities on every basis pair, as
    /// operator equations in `m`.
    pub fn check_axioms(&self) -> Vec<ModuleAxiomFailure> {
        let a = self.algebra.dim();
        let mut failures = Vec::new();
        let mul = |p: &RatMatrix, q: &RatMatrix| p.mul(q).expect("square");
        for x in 0..a {
            for y in 0..a {
                let xy = self.algebra.product(x, y);
                let r_xy = Self::combination(&self.right, xy, self.dim);
                let l_xy = Self::combination(&self.left, xy, self.dim);
                let (lx, ly, rx, ry) = (&self.left[x], &self.left[y], &self.right[x], &self.right[y]);
                // [m,[x,y]] = [[m,x],y] - [[m,y],x]
                if r_xy != mul(ry, rx).sub(&mul(rx, ry)).expect("same shape") {
                    failures.push(ModuleAxiomFailure { axiom: 1, x, y });
                }
                // [x,[m,y]] = [[x,m],y] - [[x,y],m]
                if mul(lx, ry) != mul(ry, lx).sub(&l_xy).expect("same shape") {
                    failures.push(ModuleAxiomFailure { axiom: 2, x, y });
                }
                // [x,[y,m]] = [[x,y],m] - [[x,m],y]
                if mul(lx, ly) != l_xy.sub(&mul(ry, lx)).expect("same shape") {
                    failures.push(ModuleAxiomFailure { axiom: 3, x, y });
                }
            }
        }
        failures
    }
}

/// An element of `CL^n(L, M)`, stored sparsely by flat index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    alg_dim: usize,
    mod_dim: usize,
    coeffs: BTreeMap<usize, Rational>,
}

impl Cochain {
    pub fn zero(module: &LeibnizModule, degree: usize) -> Self {
        Cochain { degree, alg_dim: module.algebra.dim(), mod_dim: module.dim, coeffs: BTreeMap::new() }
    }

    pub fn from_flat(module: &LeibnizModule, degree: usize, flat: &[Rational]) -> Result<Self, CohomologyError> {
        let mut c = Self::zero(module, degree);
        if flat.len() as u128 != c.len() {
            return Err(CohomologyError::Mismatch {
                expected: format!("{} coordinates", c.len()),
                found: flat.len().to_string(),
            });
        }
        c.coeffs = flat.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        Ok(c)
    }

    /// Cochain with `phi(args)_t = value` for each listed entry (repeats add).
    pub fn from_entries<I>(module: &LeibnizModule, degree: usize, entries: I) -> Result<Self, CohomologyError>
    where
        I: IntoIterator<Item = (Vec<usize>, usize, Rational)>,
    {
        let mut c = Self::zero(module, degree);
        for (args, t, v) in entries {
            c.add_entry(&args, t, &v)?;
        }
        Ok(c)
    }

    /// Dense entries drawn uniformly from `-3..=3`.
    pub fn random<R: Rng>(module: &LeibnizModule, degree: usize, rng: &mut R) -> Self {
        let mut c = Self::zero(module, degree);
        for i in 0..c.len() as usize {
            let v = Rational::from(rng.gen_range(-3i64..=3));
            if !v.is_zero() {
                c.coeffs.insert(i, v);
            }
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of coordinates, `dim(L)^n * dim(M)`.
    pub fn len(&self) -> u128 {
        cochain_len(self.alg_dim, self.mod_dim, self.degree)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn flat_args(&self, args: &[usize]) -> Result<usize, CohomologyError> {
        if args.len() != self.degree {
            return Err(CohomologyError::Mismatch {
                expected: format!("{} arguments", self.degree),
                found: args.len().to_string(),
            });
        }
        let mut idx = 0;
        for &i in args {
            if i >= self.alg_dim {
                return Err(CohomologyError::IndexOutOfRange { index: i, dim: self.alg_dim });
            }
            idx = idx * self.alg_dim + i;
        }
        Ok(idx)
    }

    pub fn add_entry(&mut self, args: &[usize], t: usize, v: &Rational) -> Result<(), CohomologyError> {
        if t >= self.mod_dim {
            return Err(CohomologyError::IndexOutOfRange { index: t, dim: self.mod_dim });
        }
        let key = self.flat_args(args)? * self.mod_dim + t;
        let slot = self.coeffs.entry(key).or_default();
        *slot += v;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    /// `phi(e_{args})` as a vector of `M`.
    pub fn value(&self, args: &[usize]) -> Result<Vec<Rational>, CohomologyError> {
        let base = self.flat_args(args)? * self.mod_dim;
        let mut out = vec![Rational::zero(); self.mod_dim];
        for (k, v) in self.coeffs.range(base..base + self.mod_dim) {
            out[k - base] = v.clone();
        }
        Ok(out)
    }

    pub fn get(&self, args: &[usize], t: usize) -> Result<Rational, CohomologyError> {
        Ok(self.value(args)?.get(t).cloned().unwrap_or_default())
    }

    pub fn to_flat(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len() as usize];
        for (k, c) in &self.coeffs {
            v[*k] = c.clone();
        }
        v
    }

    /// Nonzero entries as `(args, target, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, usize, &Rational)> + '_ {
        let (a, m, n) = (self.alg_dim, self.mod_dim, self.degree);
        self.coeffs.iter().map(move |(k, v)| {
            let mut rest = k / m;
            let mut args = vec![0; n];
            for slot in args.iter_mut().rev() {
                *slot = rest % a;
                rest /= a;
            }
            (args, k % m, v)
        })
    }

    pub(crate) fn check_module(&self, module: &LeibnizModule) -> Result<(), CohomologyError> {
        if self.alg_dim != module.algebra.dim() || self.mod_dim != module.dim {
            return Err(CohomologyError::Mismatch {
                expected: format!("dim L = {}, dim M = {}", module.algebra.dim(), module.dim),
                found: format!("dim L = {}, dim M = {}", self.alg_dim, self.mod_dim),
            });
        }
        Ok(())
    }
}
