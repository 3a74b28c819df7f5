use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::{is_nilpotent_matrix, kernel_basis, RatMatrix};
use crate::rational::Rational;

use super::{flatten_operator, DerivationError};

pub const DEFAULT_NIL_TRIALS: usize = 200;

#[derive(Clone, Debug)]
pub struct NilConfig {
    /// Random combinations tried after the exhaustive stages.
    pub trials: usize,
    /// Sets up to this size get every `{-1,0,1}` coefficient pattern.
    pub pattern_max_len: usize,
    pub seed: u64,
}

impl Default for NilConfig {
    fn default() -> Self {
        NilConfig { trials: DEFAULT_NIL_TRIALS, pattern_max_len: 8, seed: 42 }
    }
}

/// Dependence verdicts are exact; independence is only as good as the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum NilVerdict {
    IndependentProbable { combinations_tested: usize },
    Dependent { coefficients: Vec<Rational> },
}

impl NilVerdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, NilVerdict::IndependentProbable { .. })
    }
}

fn combine(set: &[RatMatrix], coeffs: &[Rational]) -> RatMatrix {
    let n = set[0].rows();
    let mut acc = RatMatrix::zeros(n, n);
    for (m, c) in set.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.combine(m, c).expect("same shape");
        }
    }
    acc
}

/// Looks for a nonzero coefficient vector whose combination is nilpotent:
/// exact linear dependence, single elements, `{-1,0,1}` patterns, then
/// seeded random combinations (integers in `-3..=3`, then small rationals).
pub fn check_nil_independent(set: &[RatMatrix], cfg: &NilConfig) -> Result<NilVerdict, DerivationError> {
    let first = set.first().ok_or(DerivationError::EmptySet)?;
    let n = first.rows();
    for m in set {
        if m.rows() != n || m.cols() != n {
            return Err(DerivationError::SizeMismatch { dim: n, rows: m.rows(), cols: m.cols() });
        }
    }
    let k = set.len();

    // a linear relation gives the zero operator
    let cols: Vec<Vec<Rational>> = set.iter().map(flatten_operator).collect();
    let relations = kernel_basis(&RatMatrix::from_columns(n * n, &cols)?);
    if let Some(rel) = relations.vectors().into_iter().next() {
        return Ok(NilVerdict::Dependent { coefficients: rel });
    }

    let mut tested = 0;
    let mut try_coeffs = |coeffs: Vec<Rational>| -> Result<Option<NilVerdict>, DerivationError> {
        if coeffs.iter().all(Rational::is_zero) {
            return Ok(None);
        }
        tested += 1;
        if is_nilpotent_matrix(&combine(set, &coeffs))? {
            return Ok(Some(NilVerdict::Dependent { coefficients: coeffs }));
        }
        Ok(None)
    };

    for i in 0..k {
        if let Some(v) = try_coeffs(crate::algebra::unit(k, i))? {
            return Ok(v);
        }
    }

    if k > 1 && k <= cfg.pattern_max_len {
        let mut digits = vec![0i64; k];
        'patterns: loop {
            let mut pos = k;
            loop {
                if pos == 0 {
                    break 'patterns;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] <= 1 {
                    break;
                }
                digits[pos] = -1;
            }
            // a combination and its negative are nilpotent together
            let lead = digits.iter().find(|&&d| d != 0);
            if lead != Some(&1) || digits.iter().filter(|&&d| d != 0).count() < 2 {
                continue;
            }
            if let Some(v) = try_coeffs(digits.iter().map(|&d| Rational::from(d)).collect())? {
                return Ok(v);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for t in 0..cfg.trials {
        let coeffs: Vec<Rational> = if t < cfg.trials / 2 {
            (0..k).map(|_| Rational::from(rng.gen_range(-3i64..=3))).collect()
        } else {
            (0..k).map(|_| Rational::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))).collect()
        };
        if let Some(v) = try_coeffs(coeffs)? {
            return Ok(v);
        }
    }
    Ok(NilVerdict::IndependentProbable { combinations_tested: tested })
}
