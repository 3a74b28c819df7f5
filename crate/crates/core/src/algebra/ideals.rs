use crate::linalg::{kernel_basis, RatMatrix, SubspaceBasis};
use crate::rational::Rational;

use super::{unit, AlgebraError, LeibnizAlgebra, TableBuilder};

/// A quotient algebra together with the projection from the parent.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: LeibnizAlgebra,
    /// `q x n` matrix; column `j` is the image of `e_j`.
    pub projection: RatMatrix,
    /// Parent basis indices whose images form the quotient basis.
    pub representatives: Vec<usize>,
}

fn stack(blocks: &[RatMatrix], cols: usize) -> RatMatrix {
    let mut triplets = Vec::new();
    let mut offset = 0;
    for b in blocks {
        for (r, c, v) in b.entries() {
            triplets.push((offset + r, c, v.clone()));
        }
        offset += b.rows();
    }
    RatMatrix::from_triplets(offset, cols, triplets).expect("indices within stacked shape")
}

impl LeibnizAlgebra {
    /// `{x : [L, x] = 0}`. In a Leibniz algebra this contains every square
    /// and is a two-sided ideal.
    pub fn right_annihilator(&self) -> SubspaceBasis {
        let n = self.dim();
        let blocks: Vec<RatMatrix> = (0..n).map(|i| self.left_mult_basis(i)).collect();
        kernel_basis(&stack(&blocks, n))
    }

    /// `{x : [L, x] = [x, L] = 0}`.
    pub fn center(&self) -> SubspaceBasis {
        let n = self.dim();
        let mut blocks: Vec<RatMatrix> = (0..n).map(|i| self.left_mult_basis(i)).collect();
        blocks.extend((0..n).map(|i| self.right_mult_basis(i)));
        kernel_basis(&stack(&blocks, n))
    }

    fn describe(&self, v: &[Rational]) -> String {
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { self.labels[i].clone() } else { format!("{c}*{}", self.labels[i]) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Checks that `sub` is a two-sided ideal; the error names the first
    /// product that escapes.
    pub fn check_ideal(&self, sub: &SubspaceBasis) -> Result<(), AlgebraError> {
        let n = self.dim();
        if sub.ambient_dim() != n {
            return Err(AlgebraError::WrongLength { dim: n, found: sub.ambient_dim() });
        }
        for v in sub.vectors() {
            for j in 0..n {
                let e = unit(n, j);
                let right = self.bracket(&v, &e);
                if !sub.contains(&right) {
                    return Err(AlgebraError::NotAnIdeal(format!(
                        "[{}, {}] = {} is not in the subspace",
                        self.describe(&v),
                        self.labels[j],
                        self.describe(&right)
                    )));
                }
                let left = self.bracket(&e, &v);
                if !sub.contains(&left) {
                    return Err(AlgebraError::NotAnIdeal(format!(
                        "[{}, {}] = {} is not in the subspace",
                        self.labels[j],
                        self.describe(&v),
                        self.describe(&left)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `L / I` on the basis of parent vectors at the non-pivot positions of
    /// the echelon basis of `I`.
    pub fn quotient_by_ideal(&self, ideal: &SubspaceBasis) -> Result<Quotient, AlgebraError> {
        self.check_ideal(ideal)?;
        let n = self.dim();
        let reps = ideal.complement_indices();
        let q = reps.len();
        let project = |v: &[Rational]| -> Vec<Rational> {
            let r = ideal.remainder(v);
            reps.iter().map(|&i| r[i].clone()).collect()
        };
        let cols: Vec<Vec<Rational>> = (0..n).map(|j| project(&unit(n, j))).collect();
        let projection = RatMatrix::from_columns(q, &cols)?;
        let mut t = TableBuilder::new(reps.iter().map(|&i| self.labels[i].clone()));
        for (a, &i) in reps.iter().enumerate() {
            for (b, &j) in reps.iter().enumerate() {
                let p = project(&crate::linalg::dense_from_sparse(n, self.product(i, j)));
                for (k, c) in p.into_iter().enumerate() {
                    t.add(a, b, k, c);
                }
            }
        }
        Ok(Quotient { algebra: t.build()?, projection, representatives: reps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// e1, h, x: [e1,e1] = h, [e1,x] = e1 = -[x,e1], [h,x] = 2h.
    fn small_solvable() -> LeibnizAlgebra {
        let mut t = TableBuilder::new(["e1", "h", "x"]);
        t.add(0, 0, 1, 1);
        t.add_antisymmetric(0, 2, 0, 1);
        t.add(1, 2, 1, 2);
        t.build().unwrap()
    }

    #[test]
    fn annihilator_and_center() {
        let a = small_solvable();
        let h = SubspaceBasis::from_vectors(3, &[unit(3, 1)]).unwrap();
        assert_eq!(a.right_annihilator(), h);
        assert!(a.center().is_zero());
        assert_eq!(LeibnizAlgebra::abelian(3).center(), SubspaceBasis::full(3));
        // squares always lie in the right annihilator
        assert!(a.squares_ideal().is_subspace_of(&a.right_annihilator()));
    }

    #[test]
    fn quotient_by_squares_is_lie() {
        let a = small_solvable();
        let quo = a.quotient_by_ideal(&a.squares_ideal()).unwrap();
        assert_eq!(quo.algebra.dim(), 2);
        assert_eq!(quo.representatives, vec![0, 2]);
        assert!(quo.algebra.is_lie());
        assert_eq!(quo.algebra.labels(), &["e1".to_string(), "x".to_string()]);
        // projection is a homomorphism on basis pairs
        for i in 0..3 {
            for j in 0..3 {
                let lhs = quo.projection.mul_vec(&a.bracket(&unit(3, i), &unit(3, j))).unwrap();
                let pi = quo.projection.column(i);
                let pj = quo.projection.column(j);
                assert_eq!(lhs, quo.algebra.bracket(&pi, &pj));
            }
        }
    }

    #[test]
    fn non_ideal_is_rejected() {
        let a = small_solvable();
        let span_e1 = SubspaceBasis::from_vectors(3, &[unit(3, 0)]).unwrap();
        match a.quotient_by_ideal(&span_e1) {
            Err(AlgebraError::NotAnIdeal(msg)) => assert!(msg.contains("[e1, e1] = h"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
