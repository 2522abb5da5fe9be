//! Strictly increasing index tuples, stored as bit sets.
//!
//! A `Blade` names a basis element of an exterior power: `dx^I` for forms,
//! `∂_I` for multivector fields and `e_I` in `Λ^k g`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_INDEX: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Blade(u64);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_bits(bits: u64) -> Self {
        Blade(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn single(i: usize) -> Self {
        assert!(i < MAX_INDEX, "index {i} out of range");
        Blade(1u64 << i)
    }

    /// Builds a blade from distinct indices in any order, returning the sign
    /// of the permutation that sorts them. `None` on a repeated index.
    pub fn from_unsorted(indices: &[usize]) -> Option<(i32, Blade)> {
        let mut acc = Blade::EMPTY;
        let mut sign = 1;
        for &i in indices {
            let (s, b) = acc.wedge(Blade::single(i))?;
            sign *= s;
            acc = b;
        }
        Some((sign, acc))
    }

    pub fn from_sorted(indices: &[usize]) -> Self {
        let b = indices.iter().fold(0u64, |acc, &i| {
            assert!(i < MAX_INDEX, "index {i} out of range");
            acc | (1u64 << i)
        });
        debug_assert_eq!(b.count_ones() as usize, indices.len(), "repeated index");
        Blade(b)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_INDEX && self.0 & (1u64 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.indices().collect()
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Number of elements of `self` strictly greater than `i`.
    pub fn count_above(self, i: usize) -> usize {
        if i + 1 >= MAX_INDEX {
            0
        } else {
            (self.0 >> (i + 1)).count_ones() as usize
        }
    }

    /// Number of elements of `self` strictly less than `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }

    /// Zero-based position of `i` in the sorted tuple.
    pub fn position(self, i: usize) -> Option<usize> {
        self.contains(i).then(|| self.count_below(i))
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1u64 << i))
    }

    /// `e_self ∧ e_other = sign · e_(self ∪ other)`, or `None` when they overlap.
    pub fn wedge(self, other: Blade) -> Option<(i32, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each element j of `other` must pass every element of `self` above j.
        let swaps: usize = other.indices().map(|j| self.count_above(j)).sum();
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, Blade(self.0 | other.0)))
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }
}

/// Lexicographic order on the sorted index tuples (shorter tuples first).
impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

impl Serialize for Blade {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Blade {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.windows(2).any(|w| w[0] >= w[1]) || v.iter().any(|&i| i >= MAX_INDEX) {
            return Err(serde::de::Error::custom("blade indices must be strictly increasing"));
        }
        Ok(Blade::from_sorted(&v))
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn blades(n: usize, k: usize) -> Vec<Blade> {
    use itertools::Itertools;
    (0..n)
        .combinations(k)
        .map(|c| Blade::from_sorted(&c))
        .collect()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
