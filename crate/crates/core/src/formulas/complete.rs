//! Complete vNUMA graphs into complete pNUMA graphs.

use num_rational::Ratio;

use super::check_len;
use crate::error::{Error, Result};
use crate::scalar::{self, sorted_desc, Capacity};

fn check_arity(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidArity { n, k });
    }
    Ok(())
}

/// `K_k` into `K_n` by the short-circuiting recursion: if the trivial bound
/// `floor(sum / k)` reaches the largest capacity it is attainable, otherwise
/// the largest vertex joins every match and the problem shrinks to
/// `K_{k-1}` into `K_{n-1}`.
pub fn vmcap_kn_kk_rec<T: Capacity>(n: usize, k: usize, b: &[T]) -> Result<T> {
    check_arity(n, k)?;
    check_len(b, n)?;
    let sorted = sorted_desc(b);
    let mut total = scalar::sum(sorted.iter().copied())?;
    let mut k = k;
    for &largest in &sorted {
        let bound = total / scalar::from_usize(k)?;
        if bound >= largest {
            return Ok(bound);
        }
        // k == 1 always returns above, so k stays >= 1 here.
        total = total - largest;
        k -= 1;
    }
    unreachable!("the recursion terminates once k reaches 1")
}

/// `K_k` into `K_n` as `min over 0 <= r < k of floor((sum - top_r) / (k - r))`,
/// where `top_r` is the sum of the r largest capacities.
pub fn vmcap_kn_kk_min<T: Capacity>(n: usize, k: usize, b: &[T]) -> Result<T> {
    check_arity(n, k)?;
    check_len(b, n)?;
    let sorted = sorted_desc(b);
    let total = scalar::sum(sorted.iter().copied())?;
    let mut rest = total;
    let mut best = total;
    for (r, &largest) in sorted.iter().take(k).enumerate() {
        best = best.min(rest / scalar::from_usize(k - r)?);
        rest = rest - largest;
    }
    Ok(best)
}

pub fn vmcap_k4_k2<T: Capacity>(b: &[T]) -> Result<T> {
    check_len(b, 4)?;
    let top = sorted_desc(b);
    let total = scalar::sum(top.iter().copied())?;
    let two = T::one() + T::one();
    Ok((total / two).min(total - top[0]))
}

pub fn vmcap_k4_k3<T: Capacity>(b: &[T]) -> Result<T> {
    check_len(b, 4)?;
    let top = sorted_desc(b);
    let total = scalar::sum(top.iter().copied())?;
    let two = T::one() + T::one();
    let three = two + T::one();
    Ok((total / three)
        .min((total - top[0]) / two)
        .min(total - top[0] - top[1]))
}

/// Partial means `a_i = S_{n-i} / (k - i)` for `i` in `0..k`, where `S_m` is
/// the sum of the first m entries of a non-decreasing sequence.
///
/// The sequence decreases up to a unique minimum and is non-decreasing after
/// it; this is what lets the short-circuiting recursion stop early.
pub fn partial_means<T: Capacity>(sorted: &[T], k: usize) -> Result<Vec<Ratio<T>>> {
    let n = sorted.len();
    check_arity(n, k)?;
    if sorted.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NotSorted);
    }
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(T::zero());
    for &v in sorted {
        prefix.push(scalar::add(*prefix.last().unwrap(), v)?);
    }
    (0..k)
        .map(|i| Ok(Ratio::new(prefix[n - i], scalar::from_usize(k - i)?)))
        .collect()
}
