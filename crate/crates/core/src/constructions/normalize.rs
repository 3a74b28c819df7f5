use serde::Serialize;

use crate::algebra::{LeibnizAlgebra, TableBuilder};
use crate::linalg::{inverse, RatMatrix};
use crate::rational::Rational;

use super::families::build_l_prenormalized;
use super::{CharSeqSpec, ConstructionError};

/// Result of moving a nonzero square onto `e1`.
#[derive(Clone, Debug, Serialize)]
pub struct Normalization {
    pub a1: Rational,
    pub a2: Rational,
    /// Coefficients of the first elements of blocks `2..k` in the new `e1`.
    pub b: Vec<Rational>,
    /// `h` coefficient of `[e1', e1']` before `h` is rescaled.
    pub coefficient: Rational,
    /// Column `j` is the new basis vector `j` in old coordinates.
    #[serde(skip)]
    pub change_of_basis: RatMatrix,
    #[serde(skip)]
    pub original: LeibnizAlgebra,
    /// The same algebra in the new basis; `[e1, e1] = h` holds here.
    #[serde(skip)]
    pub algebra: LeibnizAlgebra,
}

/// Picks `e1' = e1 + A2 e2 + sum B_i g_i` (with `g_i` the first element of
/// block `i+1`) so that `[e1', e1']` is a nonzero multiple of `h`, rebuilds
/// the chains from `e1'` and rescales `h`.
///
/// With `A1 = 1` the square's coefficient is a polynomial in `(A2, B)` whose
/// monomials `1, A2^2, A2, B_i, B_i^2` carry the distinct parameters, and a
/// nonzero polynomial of degree at most 2 in each variable cannot vanish on
/// all of `{0,1,2}^k`, so the grid search below always succeeds.
pub fn normalize_alpha1(
    spec: &CharSeqSpec,
    alphas: &[Rational],
    betas: &[Rational],
) -> Result<Normalization, ConstructionError> {
    let old = build_l_prenormalized(spec, alphas, betas)?;
    if alphas.iter().chain(betas).all(Rational::is_zero) {
        return Err(ConstructionError::Degenerate);
    }
    let n = old.dim();
    let h = n - 1;
    let blocks = spec.block_ranges();
    let firsts: Vec<usize> = blocks.iter().map(|b| b.start).collect();
    let k = spec.k();

    let mut digits = vec![0i64; k];
    let (e1_new, coefficient) = loop {
        let mut v = vec![Rational::zero(); n];
        v[0] = Rational::one();
        for (d, &f) in digits.iter().zip(&firsts) {
            v[f] = Rational::from(*d);
        }
        let c = old.bracket(&v, &v)[h].clone();
        if !c.is_zero() {
            break (v, c);
        }
        // next grid point, last digit fastest
        let mut pos = k;
        loop {
            if pos == 0 {
                return Err(ConstructionError::Degenerate);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] <= 2 {
                break;
            }
            digits[pos] = 0;
        }
    };

    let mut basis: Vec<Vec<Rational>> = vec![Vec::new(); n];
    basis[0] = e1_new.clone();
    for block in &blocks {
        let mut v = vec![Rational::zero(); n];
        v[block.start] = Rational::one();
        basis[block.start] = v;
        for i in block.start..block.end - 1 {
            basis[i + 1] = old.bracket(&basis[i], &e1_new);
        }
    }
    let mut hv = vec![Rational::zero(); n];
    hv[h] = coefficient.clone();
    basis[h] = hv;

    let p = RatMatrix::from_columns(n, &basis).map_err(crate::algebra::AlgebraError::from)?;
    let p_inv = inverse(&p).map_err(crate::algebra::AlgebraError::from)?;
    let mut t = TableBuilder::new(old.labels().to_vec());
    for i in 0..n {
        for j in 0..n {
            let prod = old.bracket(&basis[i], &basis[j]);
            let coords = p_inv.mul_vec(&prod).map_err(crate::algebra::AlgebraError::from)?;
            for (t_idx, c) in coords.into_iter().enumerate() {
                t.add(i, j, t_idx, c);
            }
        }
    }
    let algebra = t.build()?;
    Ok(Normalization {
        a1: Rational::one(),
        a2: Rational::from(digits[0]),
        b: digits[1..].iter().map(|&d| Rational::from(d)).collect(),
        coefficient,
        change_of_basis: p,
        original: old,
        algebra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unit;
    use crate::rational::q;

    fn spec(p: &[usize]) -> CharSeqSpec {
        CharSeqSpec::new(p.to_vec()).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    /// `P [e_i', e_j']_new = [P e_i, P e_j]_old` on every basis pair.
    fn assert_conjugates(nz: &Normalization) {
        let n = nz.original.dim();
        let p = &nz.change_of_basis;
        for i in 0..n {
            for j in 0..n {
                let lhs = p.mul_vec(&nz.algebra.bracket(&unit(n, i), &unit(n, j))).unwrap();
                let rhs = nz.original.bracket(&p.column(i), &p.column(j));
                assert_eq!(lhs, rhs, "pair ({i},{j})");
            }
        }
    }

    fn square_e1_is_h(a: &LeibnizAlgebra) {
        let h = a.label_index("h").unwrap();
        assert_eq!(a.product(0, 0), &[(h, q(1, 1))]);
    }

    #[test]
    fn only_alpha2() {
        let nz = normalize_alpha1(&spec(&[2, 1]), &ints(&[0, 1, 0]), &ints(&[0, 0])).unwrap();
        assert_eq!((nz.a2.clone(), nz.b.clone()), (q(1, 1), vec![q(0, 1)]));
        assert_eq!(nz.coefficient, q(1, 1));
        square_e1_is_h(&nz.algebra);
        assert_conjugates(&nz);
    }

    #[test]
    fn only_beta1() {
        let nz = normalize_alpha1(&spec(&[3, 2]), &ints(&[0, 0, 0]), &ints(&[1, 0])).unwrap();
        assert_eq!(nz.a2, q(1, 1));
        assert_eq!(nz.coefficient, q(1, 1));
        square_e1_is_h(&nz.algebra);
        assert_conjugates(&nz);
    }

    #[test]
    fn already_normalized_only_rescales_h() {
        let nz = normalize_alpha1(&spec(&[3, 1]), &ints(&[3, 5, 0]), &ints(&[2, 1])).unwrap();
        let n = nz.original.dim();
        let mut expect = RatMatrix::identity(n);
        expect.set(n - 1, n - 1, q(3, 1));
        assert_eq!(nz.change_of_basis, expect);
        square_e1_is_h(&nz.algebra);
        assert_conjugates(&nz);
    }

    #[test]
    fn secondary_parameters_need_b() {
        // only beta2 and alpha4 survive: A2 stays 0, B is used
        let nz = normalize_alpha1(&spec(&[2, 2, 1]), &ints(&[0, 0, 0, 0]), &ints(&[0, 1, 0])).unwrap();
        assert_eq!(nz.a2, q(0, 1));
        assert_eq!(nz.b, vec![q(1, 1), q(0, 1)]);
        assert_conjugates(&nz);
        let nz = normalize_alpha1(&spec(&[2, 2, 1]), &ints(&[0, 0, 0, 2]), &ints(&[0, 0, 0])).unwrap();
        assert_eq!(nz.coefficient, q(2, 1));
        assert_conjugates(&nz);
        square_e1_is_h(&nz.algebra);
    }

    #[test]
    fn cancellation_is_avoided() {
        // alpha2 = 1, beta1 = -1: A2 = 1 gives 1 - 1 = 0, A2 = 2 gives 4 - 2 = 2
        let nz = normalize_alpha1(&spec(&[2, 1]), &ints(&[0, 1, 0]), &ints(&[-1, 0])).unwrap();
        assert_eq!((nz.a2.clone(), nz.coefficient.clone()), (q(2, 1), q(2, 1)));
        assert_conjugates(&nz);
    }

    #[test]
    fn all_zero_is_degenerate() {
        let err = normalize_alpha1(&spec(&[2, 1]), &ints(&[0, 0, 0]), &ints(&[0, 0])).unwrap_err();
        assert!(matches!(err, ConstructionError::Degenerate));
        assert_eq!(err.to_string(), "family degenerates; no normalization exists");
    }
}
