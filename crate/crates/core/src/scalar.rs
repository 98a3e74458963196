//! Integer scalar abstraction for capacities and counts.
//!
//! Every evaluator is generic over an unsigned primitive integer. Arithmetic
//! is checked at the width of the chosen type, so `u32` callers get
//! [`Error::Overflow`] where `u64` callers get an answer.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{PrimInt, Unsigned};

use crate::error::{Error, Result};

/// Largest capacity a single vertex may carry.
pub const MAX_CAPACITY: u64 = u32::MAX as u64;

/// Unsigned integer usable as a vertex capacity.
pub trait Capacity:
    PrimInt + Unsigned + Integer + Hash + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Capacity for T where
    T: PrimInt + Unsigned + Integer + Hash + Debug + Display + Default + Send + Sync + 'static
{
}

#[inline]
pub(crate) fn add<T: Capacity>(a: T, b: T) -> Result<T> {
    a.checked_add(&b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn sum<T: Capacity>(values: impl IntoIterator<Item = T>) -> Result<T> {
    values.into_iter().try_fold(T::zero(), add)
}

/// Converts a small count (loop index, vertex count) into `T`.
#[inline]
pub(crate) fn from_usize<T: Capacity>(v: usize) -> Result<T> {
    T::from(v).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn to_u64<T: Capacity>(v: T) -> Result<u64> {
    v.to_u64().ok_or(Error::Overflow)
}

/// Vertex capacities `b_1..b_n` with range-checked entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CapacityVector<T> {
    values: Vec<T>,
}

impl<T: Capacity> CapacityVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            // Types narrower than u32 cannot exceed the bound.
            if let Some(wide) = v.to_u64() {
                if wide > MAX_CAPACITY {
                    return Err(Error::CapacityOutOfRange {
                        index: i + 1,
                        value: wide,
                        max: MAX_CAPACITY,
                    });
                }
            } else {
                return Err(Error::CapacityOutOfRange {
                    index: i + 1,
                    value: u64::MAX,
                    max: MAX_CAPACITY,
                });
            }
        }
        Ok(Self { values })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![T::zero(); len],
        }
    }

    /// Capacity of vertex `label` (1-based).
    pub fn get(&self, label: usize) -> Option<T> {
        label.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> Result<T> {
        sum(self.values.iter().copied())
    }

    /// Capacities in non-increasing order, so that `sorted_desc()[i - 1]` is
    /// the i-th largest capacity.
    pub fn sorted_desc(&self) -> Vec<T> {
        sorted_desc(&self.values)
    }
}

impl<T> std::ops::Deref for CapacityVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.values
    }
}

impl<T: Capacity> TryFrom<Vec<T>> for CapacityVector<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Self::new(values)
    }
}

pub(crate) fn sorted_desc<T: Capacity>(values: &[T]) -> Vec<T> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
}
