//! Fixed-capacity bit set used for sieves and cover families.

use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSet {
    words: SmallVec<[u64; 4]>,
}

/// Serialized as the sorted list of members.
impl Serialize for BitSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet { words: smallvec![0; capacity.div_ceil(64)] }
    }

    pub fn from_iter(capacity: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(capacity);
        for i in items {
            s.insert(i);
        }
        s
    }

    fn grow(&mut self, i: usize) {
        let w = i / 64 + 1;
        if self.words.len() < w {
            self.words.resize(w, 0);
        }
    }

    pub fn insert(&mut self, i: usize) -> bool {
        self.grow(i);
        let (w, b) = (i / 64, i % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, i: usize) {
        if let Some(w) = self.words.get_mut(i / 64) {
            *w &= !(1u64 << (i % 64));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let n = self.words.len().max(other.words.len());
        BitSet { words: (0..n).map(|i| self.word(i) | other.word(i)).collect() }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let n = self.words.len().max(other.words.len());
        BitSet { words: (0..n).map(|i| self.word(i) & other.word(i)).collect() }
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let n = self.words.len().max(other.words.len());
        BitSet { words: (0..n).map(|i| self.word(i) & !other.word(i)).collect() }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        (0..self.words.len()).all(|i| self.word(i) & !other.word(i) == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Equality ignoring trailing capacity.
    pub fn same(&self, other: &BitSet) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// Canonical form with trailing zero words removed, for hashing.
    pub fn normalized(mut self) -> BitSet {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
        self
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

    proptest! {
        #[test]
        fn set_algebra(a in proptest::collection::vec(0usize..200, 0..40),
                       b in proptest::collection::vec(0usize..200, 0..40)) {
            let sa = BitSet::from_iter(200, a.iter().copied());
            let sb = BitSet::from_iter(200, b.iter().copied());
            let u = sa.union(&sb);
            let i = sa.intersection(&sb);
            prop_assert!(sa.is_subset(&u) && sb.is_subset(&u));
            prop_assert!(i.is_subset(&sa) && i.is_subset(&sb));
            prop_assert_eq!(u.len() + i.len(), sa.len() + sb.len());
            prop_assert!(sa.difference(&sb).intersection(&sb).is_empty());
            let listed: Vec<usize> = sa.iter().collect();
            let mut want = a.clone();
            want.sort();
            want.dedup();
            prop_assert_eq!(listed, want);
        }
    }
}
