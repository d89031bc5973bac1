//! Fixed-universe bit sets used for submodules, point sets and opens.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const WORD: usize = 64;

/// A subset of `0..universe` stored as packed 64-bit words.
///
/// Sets are ordered canonically: first by cardinality, then lexicographically
/// on their sorted member lists. Under this order the empty set comes first
/// and the full universe last, which keeps lattice listings readable.
#[derive(Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BitSet {
    universe: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn empty(universe: usize) -> Self {
        BitSet {
            universe,
            words: alloc::vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    pub fn singleton(universe: usize, i: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Self::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Inserts `i`; returns `true` if it was not already present.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        let w = &mut self.words[i / WORD];
        let bit = 1u64 << (i % WORD);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / WORD] &= !(1u64 << (i % WORD));
        }
    }

    /// A 64-bit hash of the contents, stable across runs.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.universe as u64;
        for &w in &self.words {
            h = (h ^ w).wrapping_mul(0x0000_0100_0000_01b3);
            h ^= h >> 29;
        }
        h
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> BitSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| {
                // equal sizes: the set holding the lowest differing element
                // comes first in lexicographic order of sorted elements
                for (a, b) in self.words.iter().zip(&other.words) {
                    let diff = a ^ b;
                    if diff != 0 {
                        let low = diff & diff.wrapping_neg();
                        return if a & low != 0 { Ordering::Less } else { Ordering::Greater };
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let mut s = BitSet::empty(130);
        assert!(s.is_empty());
        assert!(s.insert(0));
        assert!(!s.insert(0));
        s.insert(64);
        s.insert(129);
        assert_eq!(s.to_vec(), alloc::vec![0, 64, 129]);
        assert_eq!(s.complement().len(), 127);
        assert!(BitSet::full(130).is_full());
        assert_eq!(BitSet::full(0).len(), 0);
    }

    #[test]
    fn canonical_order_puts_empty_first_and_full_last() {
        let mut v = alloc::vec![
            BitSet::full(3),
            BitSet::from_indices(3, [1]),
            BitSet::empty(3),
            BitSet::from_indices(3, [0, 2]),
            BitSet::from_indices(3, [0]),
        ];
        v.sort();
        let lists: Vec<Vec<usize>> = v.iter().map(|s| s.to_vec()).collect();
        assert_eq!(
            lists,
            alloc::vec![
                alloc::vec![],
                alloc::vec![0],
                alloc::vec![1],
                alloc::vec![0, 2],
                alloc::vec![0, 1, 2]
            ]
        );
    }

    proptest! {
        #[test]
        fn set_algebra_matches_membership(
            a in proptest::collection::vec(any::<bool>(), 0..150),
            seed in any::<u64>(),
        ) {
            let n = a.len();
            let b: Vec<bool> = (0..n).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
            let sa = BitSet::from_indices(n, (0..n).filter(|&i| a[i]));
            let sb = BitSet::from_indices(n, (0..n).filter(|&i| b[i]));
            for i in 0..n {
                prop_assert_eq!(sa.union(&sb).contains(i), a[i] || b[i]);
                prop_assert_eq!(sa.intersection(&sb).contains(i), a[i] && b[i]);
                prop_assert_eq!(sa.difference(&sb).contains(i), a[i] && !b[i]);
                prop_assert_eq!(sa.complement().contains(i), !a[i]);
            }
            prop_assert_eq!(sa.is_subset(&sb), (0..n).all(|i| !a[i] || b[i]));
            prop_assert_eq!(sa.len(), a.iter().filter(|&&x| x).count());
        }

        #[test]
        fn order_is_size_then_sorted_elements(
            a in proptest::collection::btree_set(0usize..140, 0..12),
            b in proptest::collection::btree_set(0usize..140, 0..12),
        ) {
            let sa = BitSet::from_indices(140, a.iter().copied());
            let sb = BitSet::from_indices(140, b.iter().copied());
            let expected = a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()));
            prop_assert_eq!(sa.cmp(&sb), expected);
        }
    }
}
