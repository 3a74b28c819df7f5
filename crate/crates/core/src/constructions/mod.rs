//! Builders for the model algebras and the parametric families on top of
//! them, plus partition enumeration for sweeps.
//!
//! Basis order everywhere: `e1`, the chain blocks in order, then `h` (for
//! the Leibniz families), then `x1..x_{k+1}` (for the solvable ones).

mod families;
mod normalize;
mod partitions;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::AlgebraError;

pub use families::{
    build_l_general, build_l_particular, build_l_prenormalized, build_n_c, build_r_c, build_r_general,
    build_r_particular, LFamilyParams,
};
pub use normalize::{normalize_alpha1, Normalization};
pub use partitions::{enumerate_partitions, partition_asymptotic, partition_count};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid characteristic sequence: {0}")]
    InvalidSpec(String),
    #[error("expected {expected} {what}, found {found}")]
    ParamCount { what: &'static str, expected: usize, found: usize },
    #[error("family degenerates; no normalization exists")]
    Degenerate,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A nonincreasing sequence `n1 >= n2 >= .. >= nk >= 1` of chain lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CharSeqSpec {
    parts: Vec<usize>,
}

impl CharSeqSpec {
    pub fn new(parts: Vec<usize>) -> Result<Self, ConstructionError> {
        if parts.is_empty() {
            return Err(ConstructionError::InvalidSpec("at least one part is required".into()));
        }
        if parts.contains(&0) {
            return Err(ConstructionError::InvalidSpec("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ConstructionError::InvalidSpec(format!("{parts:?} is not nonincreasing")));
        }
        Ok(CharSeqSpec { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of blocks `k`.
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of `e` basis vectors, `1 + sum n_i`.
    pub fn chain_dim(&self) -> usize {
        1 + self.total()
    }

    /// 0-based basis indices of each block; block 0 is `e2..e_{n1+1}`.
    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 1;
        self.parts
            .iter()
            .map(|&n| {
                let r = start..start + n;
                start += n;
                r
            })
            .collect()
    }

    pub(crate) fn require_long_first_block(&self) -> Result<(), ConstructionError> {
        if self.parts[0] < 2 {
            return Err(ConstructionError::InvalidSpec("this family needs n1 >= 2".into()));
        }
        Ok(())
    }
}

impl fmt::Display for CharSeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for CharSeqSpec {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| ConstructionError::InvalidSpec(format!("'{p}' is not a positive integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CharSeqSpec::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(CharSeqSpec::new(vec![]).is_err());
        assert!(CharSeqSpec::new(vec![1, 2]).is_err());
        assert!(CharSeqSpec::new(vec![2, 0]).is_err());
        let s: CharSeqSpec = "3, 2,2".parse().unwrap();
        assert_eq!(s.parts(), &[3, 2, 2]);
        assert_eq!(s.to_string(), "3,2,2");
        assert_eq!(s.block_ranges(), vec![1..4, 4..6, 6..8]);
        assert_eq!(s.chain_dim(), 8);
        assert!("2,x".parse::<CharSeqSpec>().is_err());
    }
}
