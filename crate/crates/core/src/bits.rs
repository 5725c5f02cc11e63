//! Fixed-width member sets over a ground set of at most 64 points.

use std::cmp::Ordering;
use std::fmt;

/// Largest ground set a [`Bits`] can address.
pub const MAX_GROUND: usize = 64;

/// A subset of `0..64`, stored as a single machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Bits(pub u64);

impl Bits {
    pub const EMPTY: Bits = Bits(0);

    #[inline]
    pub fn full(n: usize) -> Bits {
        debug_assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            Bits(u64::MAX)
        } else {
            Bits((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(i: usize) -> Bits {
        Bits(1u64 << i)
    }

    /// Points strictly below `i`.
    #[inline]
    pub fn below(i: usize) -> Bits {
        Bits::full(i)
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    #[inline]
    pub fn with(self, i: usize) -> Bits {
        Bits(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn union(self, other: Bits) -> Bits {
        Bits(self.0 | other.0)
    }

    #[inline]
    pub fn intersect(self, other: Bits) -> Bits {
        Bits(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: Bits) -> Bits {
        Bits(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Bits) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Bits) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> BitsIter {
        BitsIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Canonical ordering of lattice elements: by size, then lexicographically
    /// on the sorted member lists.
    pub fn canonical_cmp(&self, other: &Bits) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 >> diff.trailing_zeros() & 1 == 1 {
                // equal sizes: lowest differing point decides
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut b = Bits::EMPTY;
        for i in iter {
            b.insert(i);
        }
        b
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct BitsIter(u64);

impl Iterator for BitsIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for BitsIter {}
