use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{CharSeqSpec, ConstructionError};

fn require_positive(n: usize) -> Result<(), ConstructionError> {
    if n < 1 {
        return Err(ConstructionError::InvalidSpec("n must be at least 1".into()));
    }
    Ok(())
}

/// All nonincreasing sequences of positive integers summing to `n`, in
/// lexicographic order (`(1,1,..,1)` first, `(n)` last).
pub fn enumerate_partitions(n: usize) -> Result<Vec<CharSeqSpec>, ConstructionError> {
    require_positive(n)?;
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<CharSeqSpec>) {
    if remaining == 0 {
        out.push(CharSeqSpec { parts: current.clone() });
        return;
    }
    for part in 1..=max_part.min(remaining) {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

/// `p(n)` by the standard coin-change recurrence.
pub fn partition_count(n: usize) -> Result<BigUint, ConstructionError> {
    require_positive(n)?;
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for part in 1..=n {
        for total in part..=n {
            let add = ways[total - part].clone();
            ways[total] += add;
        }
    }
    Ok(ways.swap_remove(n))
}

/// `exp(pi sqrt(2n/3)) / (4 n sqrt 3)`, for reporting only.
pub fn partition_asymptotic(n: usize) -> Result<f64, ConstructionError> {
    require_positive(n)?;
    let n = n as f64;
    Ok((std::f64::consts::PI * (2.0 * n / 3.0).sqrt()).exp() / (4.0 * n * 3f64.sqrt()))
}
