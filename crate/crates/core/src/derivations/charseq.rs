use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{unit, LeibnizAlgebra};
use crate::linalg::{nilpotent_jordan_blocks, LinalgError};
use crate::rational::Rational;

use super::DerivationError;

pub const DEFAULT_CHARSEQ_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharSequence {
    /// Jordan block sizes of `R_witness`, largest first.
    pub parts: Vec<usize>,
    pub witness: Vec<Rational>,
}

fn blocks_of(l: &LeibnizAlgebra, x: &[Rational]) -> Result<Vec<usize>, DerivationError> {
    nilpotent_jordan_blocks(&l.right_mult_matrix(x)).map_err(|e| match e {
        LinalgError::NotNilpotent => DerivationError::NotNilpotent,
        other => other.into(),
    })
}

/// Lexicographic maximum of the Jordan type of `R_x` over `x` outside
/// `L^2`, estimated on the echelon complement of `L^2` and on `samples`
/// seeded combinations with entries in `-2..=2`. The maximum is attained on
/// a Zariski-open set, so sampling finds it with high probability.
pub fn characteristic_sequence(l: &LeibnizAlgebra, samples: usize, seed: u64) -> Result<CharSequence, DerivationError> {
    let n = l.dim();
    let l2 = l.derived_algebra();
    if l2.dim() == n {
        return Err(DerivationError::PerfectAlgebra);
    }
    let mut best: Option<CharSequence> = None;
    let mut consider = |x: Vec<Rational>| -> Result<(), DerivationError> {
        let parts = blocks_of(l, &x)?;
        if best.as_ref().is_none_or(|b| parts > b.parts) {
            best = Some(CharSequence { parts, witness: x });
        }
        Ok(())
    };
    for c in l2.complement_indices() {
        consider(unit(n, c))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x: Vec<Rational> = (0..n).map(|_| Rational::from(rng.gen_range(-2i64..=2))).collect();
        if !l2.contains(&x) {
            consider(x)?;
        }
    }
    Ok(best.expect("complement is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TableBuilder;
    use crate::constructions::{build_n_c, build_r_c, CharSeqSpec};
    use crate::linalg::{inverse, RatMatrix};

    fn nc(parts: &[usize]) -> LeibnizAlgebra {
        build_n_c(&CharSeqSpec::new(parts.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn model_algebras() {
        assert_eq!(characteristic_sequence(&nc(&[2, 1]), 100, 42).unwrap().parts, vec![2, 1, 1]);
        assert_eq!(characteristic_sequence(&nc(&[3, 2]), 100, 42).unwrap().parts, vec![3, 2, 1]);
        let a = LeibnizAlgebra::abelian(4);
        assert_eq!(characteristic_sequence(&a, 10, 1).unwrap().parts, vec![1, 1, 1, 1]);
    }

    #[test]
    fn witness_realizes_parts() {
        let l = nc(&[3, 2, 1]);
        let cs = characteristic_sequence(&l, 100, 42).unwrap();
        assert!(!l.derived_algebra().contains(&cs.witness));
        assert_eq!(blocks_of(&l, &cs.witness).unwrap(), cs.parts);
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        let r = build_r_c(&CharSeqSpec::new(vec![2]).unwrap()).unwrap();
        assert_eq!(characteristic_sequence(&r, 10, 42), Err(DerivationError::NotNilpotent));
    }

    #[test]
    fn invariant_under_change_of_basis() {
        let l = nc(&[3, 2]);
        let n = l.dim();
        let mut p = RatMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                p.set(i, j, Rational::from(((i * 3 + j) % 5) as i64 - 2));
            }
        }
        p.set(n - 1, 0, Rational::from(1));
        let pinv = inverse(&p).unwrap();
        let mut t = TableBuilder::new((1..=n).map(|i| format!("v{i}")));
        for i in 0..n {
            for j in 0..n {
                let prod = pinv.mul_vec(&l.bracket(&p.column(i), &p.column(j))).unwrap();
                for (k, c) in prod.into_iter().enumerate() {
                    t.add(i, j, k, c);
                }
            }
        }
        let moved = t.build().unwrap();
        assert_eq!(
            characteristic_sequence(&moved, 100, 3).unwrap().parts,
            characteristic_sequence(&l, 100, 3).unwrap().parts
        );
    }
}
