//! Complete bipartite hosts: `C4`, `K_{m,n}`, stars and the enhanced cube.

use super::check_len;
use super::complete::vmcap_k4_k2;
use crate::error::Result;
use crate::scalar::{self, Capacity};

/// `min(b1 + b3, b2 + b4)`: C4 is K2,2 with parts {1,3} and {2,4}.
pub fn vmcap_c4_k2<T: Capacity>(b: &[T]) -> Result<T> {
    check_len(b, 4)?;
    Ok(scalar::add(b[0], b[2])?.min(scalar::add(b[1], b[3])?))
}

/// `K2` into `K_{m,n}` labeled with part A = 1..m: the smaller part total.
pub fn vmcap_kmn_k2<T: Capacity>(m: usize, n: usize, b: &[T]) -> Result<T> {
    check_len(b, m + n)?;
    let (a, rest) = b.split_at(m);
    Ok(scalar::sum(a.iter().copied())?.min(scalar::sum(rest.iter().copied())?))
}

pub fn vmcap_q33_k2<T: Capacity>(b: &[T]) -> Result<T> {
    check_len(b, 8)?;
    let parts = [b[0], b[2], b[4], b[6], b[1], b[3], b[5], b[7]];
    vmcap_kmn_k2(4, 4, &parts)
}

/// A C4 in K4,4 is two distinct odd vertices plus two distinct even ones, so
/// each side independently solves K2 into K4.
pub fn vmcap_q33_c4<T: Capacity>(b: &[T]) -> Result<T> {
    check_len(b, 8)?;
    let odd = vmcap_k4_k2(&[b[0], b[2], b[4], b[6]])?;
    let even = vmcap_k4_k2(&[b[1], b[3], b[5], b[7]])?;
    Ok(odd.min(even))
}
