use serde::Serialize;

use crate::linalg::SubspaceBasis;
use crate::rational::Rational;

use super::{unit, AlgebraError, LeibnizAlgebra, TableBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    LowerCentral,
    Derived,
}

/// Dimensions of a descending series, stopped at the first repeated
/// dimension (the repeat itself is not listed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub dims: Vec<usize>,
    pub terminated: bool,
}

impl LeibnizAlgebra {
    /// `span{[a, b] : a in left, b in right}`.
    pub fn product_space(&self, left: &SubspaceBasis, right: &SubspaceBasis) -> SubspaceBasis {
        let a = left.vectors();
        let b = right.vectors();
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                out.push(self.bracket(x, y));
            }
        }
        SubspaceBasis::from_vectors(self.dim(), &out).expect("vectors have algebra dimension")
    }

    /// `L^2 = [L, L]`.
    pub fn derived_algebra(&self) -> SubspaceBasis {
        let n = self.dim();
        let all: Vec<Vec<Rational>> = self
            .products()
            .map(|(_, p)| crate::linalg::dense_from_sparse(n, p))
            .collect();
        SubspaceBasis::from_vectors(n, &all).expect("vectors have algebra dimension")
    }

    fn series_terms(&self, kind: SeriesKind) -> Vec<SubspaceBasis> {
        let full = SubspaceBasis::full(self.dim());
        let mut terms = vec![full.clone()];
        loop {
            let current = terms.last().expect("nonempty");
            if current.is_zero() {
                break;
            }
            let next = match kind {
                SeriesKind::LowerCentral => self.product_space(current, &full),
                SeriesKind::Derived => self.product_space(current, current),
            };
            if next.dim() == current.dim() {
                break;
            }
            terms.push(next);
        }
        terms
    }

    /// `L^1 = L`, `L^{k+1} = [L^k, L]`.
    pub fn lower_central_terms(&self) -> Vec<SubspaceBasis> {
        self.series_terms(SeriesKind::LowerCentral)
    }

    /// `L^[1] = L`, `L^[s+1] = [L^[s], L^[s]]`.
    pub fn derived_terms(&self) -> Vec<SubspaceBasis> {
        self.series_terms(SeriesKind::Derived)
    }

    fn report(&self, kind: SeriesKind) -> SeriesReport {
        let dims: Vec<usize> = self.series_terms(kind).iter().map(SubspaceBasis::dim).collect();
        let terminated = dims.last() == Some(&0);
        SeriesReport { kind, dims, terminated }
    }

    pub fn lower_central_series(&self) -> SeriesReport {
        self.report(SeriesKind::LowerCentral)
    }

    pub fn derived_series(&self) -> SeriesReport {
        self.report(SeriesKind::Derived)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().terminated
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().terminated
    }

    /// The subspace as an algebra in its own right, in the echelon basis of
    /// `sub`. Fails if the subspace is not closed under the bracket.
    pub fn subalgebra(&self, sub: &SubspaceBasis) -> Result<LeibnizAlgebra, AlgebraError> {
        if sub.ambient_dim() != self.dim() {
            return Err(AlgebraError::WrongLength { dim: self.dim(), found: sub.ambient_dim() });
        }
        let basis = sub.vectors();
        let labels: Vec<String> = (1..=basis.len()).map(|i| format!("s{i}")).collect();
        let mut t = TableBuilder::new(labels);
        for (a, x) in basis.iter().enumerate() {
            for (b, y) in basis.iter().enumerate() {
                let p = self.bracket(x, y);
                let coords = sub
                    .coordinates(&p)
                    .ok_or_else(|| AlgebraError::NotASubalgebra(format!("[s{}, s{}] leaves the subspace", a + 1, b + 1)))?;
                for (k, c) in coords.into_iter().enumerate() {
                    t.add(a, b, k, c);
                }
            }
        }
        Ok(t.build_unchecked())
    }

    /// The span of all squares `[x, x]`; a two-sided ideal whose quotient is Lie.
    pub fn squares_ideal(&self) -> SubspaceBasis {
        let n = self.dim();
        let mut gens = Vec::new();
        for i in 0..n {
            gens.push(self.bracket(&unit(n, i), &unit(n, i)));
            for j in i + 1..n {
                let mut s = unit(n, i);
                s[j] = Rational::one();
                gens.push(self.bracket(&s, &s));
            }
        }
        SubspaceBasis::from_vectors(n, &gens).expect("vectors have algebra dimension")
    }
}
