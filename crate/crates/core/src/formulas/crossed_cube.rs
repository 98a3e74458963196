//! The ladder `L4` and the crossed cube `CQ3`.
//!
//! CQ3 is the ladder plus the cross edges (1,7) and (2,8). Once the number
//! of matches on the cross edges is fixed the rest is a ladder problem, and
//! the ladder value only depends on the difference `x - y` between the two
//! cross-edge multiplicities.

use super::bipartite::vmcap_c4_k2;
use super::check_len;
use crate::error::Result;
use crate::scalar::{self, Capacity};

/// Rounding used for `(sum_odd - sum_even) / 2` when picking the cross-edge
/// balance. All three give the same capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaRounding {
    #[default]
    Floor,
    Ceil,
    TowardZero,
}

/// Cross-edge matches `(x, y)` on (1,7) and (2,8) realizing the optimal
/// clamped balance `x - y`. At most one of them is non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossMatches<T> {
    pub x: T,
    pub y: T,
}

/// Ladder capacities after capping vertices 1, 2, 7, 8 by their neighbor sums.
fn ladder_ends<T: Capacity>(b: &[T]) -> Result<[T; 4]> {
    Ok([
        b[0].min(scalar::add(b[1], b[3])?),
        b[1].min(scalar::add(b[0], b[2])?),
        b[6].min(scalar::add(b[5], b[7])?),
        b[7].min(scalar::add(b[4], b[6])?),
    ])
}

/// `min(n1 + b3 + b5 + n7, n2 + b4 + b6 + n8)` where `n*` are the normalized
/// end capacities.
pub fn vmcap_l4_k2<T: Capacity>(b: &[T]) -> Result<T> {
    check_len(b, 8)?;
    let [n1, n2, n7, n8] = ladder_ends(b)?;
    let odd = scalar::sum([n1, b[2], b[4], n7])?;
    let even = scalar::sum([n2, b[3], b[5], n8])?;
    Ok(odd.min(even))
}

/// Optimal cross-edge usage for `K2` into `CQ3` under the given rounding.
pub fn cq3_cross_matches<T: Capacity>(b: &[T], rounding: DeltaRounding) -> Result<CrossMatches<T>> {
    check_len(b, 8)?;
    let odd = scalar::sum([b[0], b[2], b[4], b[6]])?;
    let even = scalar::sum([b[1], b[3], b[5], b[7]])?;
    let two = T::one() + T::one();
    let half_down = |d: T| d / two;
    let half_up = |d: T| d / two + d % two;
    if odd >= even {
        let diff = odd - even;
        let raw = match rounding {
            DeltaRounding::Floor | DeltaRounding::TowardZero => half_down(diff),
            DeltaRounding::Ceil => half_up(diff),
        };
        Ok(CrossMatches {
            x: raw.min(b[0].min(b[6])),
            y: T::zero(),
        })
    } else {
        // Negative balance: magnitude of floor(-d/2) is ceil(d/2).
        let diff = even - odd;
        let raw = match rounding {
            DeltaRounding::Floor => half_up(diff),
            DeltaRounding::Ceil | DeltaRounding::TowardZero => half_down(diff),
        };
        Ok(CrossMatches {
            x: T::zero(),
            y: raw.min(b[1].min(b[7])),
        })
    }
}

pub fn vmcap_cq3_k2<T: Capacity>(b: &[T]) -> Result<T> {
    vmcap_cq3_k2_rounded(b, DeltaRounding::Floor)
}

/// Six-term minimum with the balance `delta = x - y` from
/// [`cq3_cross_matches`].
pub fn vmcap_cq3_k2_rounded<T: Capacity>(b: &[T], rounding: DeltaRounding) -> Result<T> {
    let CrossMatches { x, y } = cq3_cross_matches(b, rounding)?;
    let s = |labels: &[usize]| scalar::sum(labels.iter().map(|&l| b[l - 1]));
    // odd - delta and even + delta; x <= min(b1, b7) keeps the subtraction in range.
    let odd_side = scalar::add(s(&[1, 3, 5, 7])? - x, y)?;
    let even_side = scalar::add(s(&[2, 4, 6, 8])?, x)? - y;
    let terms = [
        odd_side,
        even_side,
        s(&[2, 3, 4, 5, 7])?,
        s(&[1, 3, 5, 6, 8])?,
        s(&[2, 4, 5, 6, 7])?,
        s(&[1, 3, 4, 6, 8])?,
    ];
    Ok(terms.into_iter().min().unwrap())
}

/// Each C4 of CQ3 is a pair of consecutive rungs, so the problem is `K2`
/// into a C4 whose vertices are the rungs with capacity `min` of their ends.
pub fn vmcap_cq3_c4<T: Capacity>(b: &[T]) -> Result<T> {
    check_len(b, 8)?;
    vmcap_c4_k2(&rung_minima(b))
}

pub(crate) fn rung_minima<T: Capacity>(b: &[T]) -> [T; 4] {
    [b[0].min(b[1]), b[2].min(b[3]), b[4].min(b[5]), b[6].min(b[7])]
}
