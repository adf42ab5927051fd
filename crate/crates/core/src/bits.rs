//! Packed bit sets and square bit relations.
//!
//! Relations on `k` points are stored as `k` rows of `ceil(k / 64)` words.
//! Row `a` holds every `b` with `a R b`.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self {
            words: vec![u64::MAX; len.div_ceil(WORD)],
            len,
        };
        set.clear_tail();
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut set = Self::new(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Universe size, not the number of members.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.len)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
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

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// True when the set is exactly `{i}`.
    pub fn is_singleton_of(&self, i: usize) -> bool {
        self.contains(i) && self.count() == 1
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

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
}

impl Serialize for BitSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.count()))?;
        for i in self.iter() {
            seq.serialize_element(&i)?;
        }
        seq.end()
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
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Binary relation on `0..n`, one [`BitSet`] per row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitRelation {
    rows: Vec<BitSet>,
}

impl BitRelation {
    pub fn empty(n: usize) -> Self {
        Self {
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut rel = Self::empty(n);
        for i in 0..n {
            rel.insert(i, i);
        }
        rel
    }

    pub fn from_fn(n: usize, mut related: impl FnMut(usize, usize) -> bool) -> Self {
        let mut rel = Self::empty(n);
        for a in 0..n {
            for b in 0..n {
                if related(a, b) {
                    rel.insert(a, b);
                }
            }
        }
        rel
    }

    pub fn from_rows(rows: Vec<BitSet>) -> Self {
        debug_assert!(rows.iter().all(|r| r.capacity() == rows.len()));
        Self { rows }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
    }

    #[inline]
    pub fn row(&self, a: usize) -> &BitSet {
        &self.rows[a]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum()
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        let mut out = Self::empty(n);
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter() {
                out.insert(b, a);
            }
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.intersection(b))
                .collect(),
        }
    }

    /// `self ; other`: `a` relates to `c` when some `b` has `a self b` and `b other c`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.size();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitSet::new(n);
                for b in row.iter() {
                    acc.union_with(&other.rows[b]);
                }
                acc
            })
            .collect();
        Self { rows }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn first_irreflexive(&self) -> Option<usize> {
        (0..self.size()).find(|&a| !self.contains(a, a))
    }

    /// A triple `(a, b, c)` with `a R b`, `b R c` and not `a R c`, if any.
    pub fn first_intransitive(&self) -> Option<(usize, usize, usize)> {
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter() {
                if !self.rows[b].is_subset(row) {
                    let mut missing = self.rows[b].clone();
                    missing.difference_with(row);
                    return missing.first().map(|c| (a, b, c));
                }
            }
        }
        None
    }

    pub fn first_asymmetric_pair(&self) -> Option<(usize, usize)> {
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter() {
                if a != b && self.contains(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn first_unsymmetric_pair(&self) -> Option<(usize, usize)> {
        for (a, row) in self.rows.iter().enumerate() {
            for b in row.iter() {
                if !self.contains(b, a) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_reflexive(&self) -> bool {
        self.first_irreflexive().is_none()
    }

    pub fn is_transitive(&self) -> bool {
        self.first_intransitive().is_none()
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_reflexive() && self.is_transitive() && self.first_asymmetric_pair().is_none()
    }

    /// Covering pairs of a partial order: `a < b` with nothing strictly between.
    pub fn transitive_reduction(&self) -> Self {
        let n = self.size();
        let strict: Vec<BitSet> = self
            .rows
            .iter()
            .enumerate()
            .map(|(a, row)| {
                let mut r = row.clone();
                r.remove(a);
                r
            })
            .collect();
        let rows = strict
            .iter()
            .map(|row| {
                let mut covers = row.clone();
                for c in row.iter() {
                    covers.difference_with(&strict[c]);
                }
                covers
            })
            .collect::<Vec<_>>();
        debug_assert_eq!(rows.len(), n);
        Self { rows }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().map(move |b| (a, b)))
    }
}
