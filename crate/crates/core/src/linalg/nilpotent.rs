use super::{rank, LinalgError, RatMatrix};

/// Ranks of `m^0, m^1, ...` up to the first power whose rank repeats the
/// previous one (the rank sequence of a square matrix is nonincreasing and
/// stabilizes once two consecutive terms agree).
pub fn power_ranks(m: &RatMatrix) -> Result<Vec<usize>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut ranks = vec![n];
    let mut power = RatMatrix::identity(n);
    loop {
        power = power.mul(m)?;
        let r = if power.is_zero() { 0 } else { rank(&power) };
        let prev = *ranks.last().expect("nonempty");
        ranks.push(r);
        if r == 0 || r == prev {
            return Ok(ranks);
        }
    }
}

pub fn is_nilpotent_matrix(m: &RatMatrix) -> Result<bool, LinalgError> {
    Ok(power_ranks(m)?.last() == Some(&0))
}

/// Jordan block sizes of a nilpotent matrix, largest first.
///
/// With `r_s = rank(m^s)`, the number of blocks of size at least `s` is
/// `r_{s-1} - r_s`.
pub fn nilpotent_jordan_blocks(m: &RatMatrix) -> Result<Vec<usize>, LinalgError> {
    let ranks = power_ranks(m)?;
    if ranks.last() != Some(&0) {
        return Err(LinalgError::NotNilpotent);
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut blocks = Vec::new();
    for s in (1..=at_least.len()).rev() {
        let exactly = at_least[s - 1] - at_least.get(s).copied().unwrap_or(0);
        blocks.extend(std::iter::repeat_n(s, exactly));
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inverse;
    use crate::rational::Rational;
    use proptest::prelude::*;

    fn jordan(blocks: &[usize]) -> RatMatrix {
        let n: usize = blocks.iter().sum();
        let mut m = RatMatrix::zeros(n, n);
        let mut start = 0;
        for &b in blocks {
            for i in 0..b.saturating_sub(1) {
                m.set(start + i, start + i + 1, Rational::one());
            }
            start += b;
        }
        m
    }

    #[test]
    fn nilpotency_examples() {
        let strict = RatMatrix::from_i64(&[&[0, 1, 2], &[0, 0, 3], &[0, 0, 0]]).unwrap();
        assert!(is_nilpotent_matrix(&strict).unwrap());
        assert!(!is_nilpotent_matrix(&RatMatrix::identity(3)).unwrap());
        assert!(is_nilpotent_matrix(&jordan(&[3])).unwrap());
        assert!(is_nilpotent_matrix(&RatMatrix::zeros(0, 0)).unwrap());
        assert!(matches!(
            is_nilpotent_matrix(&RatMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn block_examples() {
        assert_eq!(nilpotent_jordan_blocks(&RatMatrix::zeros(4, 4)).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(nilpotent_jordan_blocks(&jordan(&[3])).unwrap(), vec![3]);
        assert_eq!(nilpotent_jordan_blocks(&jordan(&[2, 2, 1])).unwrap(), vec![2, 2, 1]);
        assert_eq!(
            nilpotent_jordan_blocks(&RatMatrix::identity(2)),
            Err(LinalgError::NotNilpotent)
        );
    }

    fn unit_triangular(n: usize, entries: &[i64], upper: bool) -> RatMatrix {
        let mut m = RatMatrix::identity(n);
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                if (upper && j > i) || (!upper && j < i) {
                    m.set(i, j, Rational::from(entries[k % entries.len()]));
                    k += 1;
                }
            }
        }
        m
    }

    proptest! {
        #[test]
        fn conjugation_preserves_blocks(
            parts in proptest::collection::vec(1usize..=3, 1..=4),
            up in proptest::collection::vec(-2i64..=2, 1..=12),
            low in proptest::collection::vec(-2i64..=2, 1..=12),
        ) {
            let mut parts = parts;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let n: usize = parts.iter().sum();
            let p = unit_triangular(n, &up, true).mul(&unit_triangular(n, &low, false)).unwrap();
            let pinv = inverse(&p).unwrap();
            let conj = p.mul(&jordan(&parts)).unwrap().mul(&pinv).unwrap();
            let blocks = nilpotent_jordan_blocks(&conj).unwrap();
            prop_assert_eq!(blocks.iter().sum::<usize>(), n);
            prop_assert_eq!(&blocks, &parts);
            // conjugate partition: #blocks of size >= s equals r_{s-1} - r_s
            let ranks = power_ranks(&conj).unwrap();
            for s in 1..ranks.len() {
                let count = blocks.iter().filter(|&&b| b >= s).count();
                prop_assert_eq!(count, ranks[s - 1] - ranks[s]);
            }
        }
    }
}
