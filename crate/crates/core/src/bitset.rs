//! Fixed-size word-packed bitsets over unit indices.
//!
//! Zero-partner rows and group memberships are stored this way so that the
//! counting step reduces to word-wise `AND` plus popcount.

use std::fmt;

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    /// An empty set over the universe `0..len`.
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    /// The full set `0..len`.
    pub fn full(len: usize) -> Self {
        let mut set = Bitset {
            words: vec![u64::MAX; len.div_ceil(WORD_BITS)],
            len,
        };
        set.clear_tail();
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut set = Bitset::new(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Size of the universe, not the number of members.
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} outside universe of {}", self.len);
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} outside universe of {}", self.len);
        self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD_BITS] & (1 << (i % WORD_BITS)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `|self ∩ other|` without materialising the intersection.
    #[inline]
    pub fn intersection_count(&self, other: &Bitset) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Overwrites `self` with `a ∩ b` and reports whether the result is nonempty.
    #[inline]
    pub fn assign_intersection(&mut self, a: &Bitset, b: &Bitset) -> bool {
        debug_assert_eq!(a.len, b.len);
        debug_assert_eq!(self.len, a.len);
        let mut any = 0u64;
        for ((dst, x), y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *dst = x & y;
            any |= *dst;
        }
        any != 0
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Bitset) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Bitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a> IntoIterator for &'a Bitset {
    type Item = usize;
    type IntoIter = Ones<'a>;

    fn into_iter(self) -> Ones<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn full_set_respects_universe() {
        for len in [0, 1, 63, 64, 65, 130] {
            let set = Bitset::full(len);
            assert_eq!(set.count(), len);
            assert_eq!(set.to_vec(), (0..len).collect::<Vec<_>>());
        }
    }

    #[test]
    fn insert_remove() {
        let mut set = Bitset::new(100);
        set.insert(3);
        set.insert(64);
        set.insert(99);
        assert_eq!(set.to_vec(), vec![3, 64, 99]);
        set.remove(64);
        assert!(!set.contains(64));
        assert!(!set.contains(1000));
        assert_eq!(set.count(), 2);
    }

    proptest! {
        #[test]
        fn matches_btreeset(len in 1usize..200,
                            a in prop::collection::vec(0usize..200, 0..60),
                            b in prop::collection::vec(0usize..200, 0..60)) {
            let a: BTreeSet<usize> = a.into_iter().filter(|&x| x < len).collect();
            let b: BTreeSet<usize> = b.into_iter().filter(|&x| x < len).collect();
            let sa = Bitset::from_indices(len, a.iter().copied());
            let sb = Bitset::from_indices(len, b.iter().copied());
            let expected: Vec<usize> = a.intersection(&b).copied().collect();

            prop_assert_eq!(sa.intersection_count(&sb), expected.len());
            let mut dst = Bitset::new(len);
            prop_assert_eq!(dst.assign_intersection(&sa, &sb), !expected.is_empty());
            prop_assert_eq!(dst.to_vec(), expected);
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));

            let mut u = sa.clone();
            u.union_with(&sb);
            prop_assert_eq!(u.to_vec(), a.union(&b).copied().collect::<Vec<_>>());
        }
    }
}
