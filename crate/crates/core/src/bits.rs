//! Fixed-length bitsets backing [`GroupSubset`](crate::GroupSubset).
//!
//! Up to 128 bits live inline; longer sets spill to the heap.

use smallvec::{smallvec, SmallVec};
use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            words: smallvec![0; words_for(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bits {
            len,
            words: smallvec![u64::MAX; words_for(len)],
        };
        b.trim();
        b
    }

    /// Builds a bitset of length `len` from a single word (`len <= 64`).
    pub fn from_word(len: usize, word: u64) -> Self {
        debug_assert!(len <= WORD);
        let mut b = Bits {
            len,
            words: smallvec![word; words_for(len)],
        };
        if len == 0 {
            b.words.clear();
        }
        b.trim();
        b
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bits::new(len);
        for i in indices {
            b.insert(i);
        }
        b
    }

    fn trim(&mut self) {
        let extra = self.words.len() * WORD - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The first word, for sets of length at most 64.
    #[inline]
    pub fn word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
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
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn union_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !*b;
        }
    }

    pub fn complement(&self) -> Bits {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Bits) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// Cyclic rotation: bit `i` moves to `(i + k) mod len`.
    pub fn rotated(&self, k: usize) -> Bits {
        let n = self.len;
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        if k == 0 {
            return self.clone();
        }
        if n <= WORD {
            let x = self.word();
            let mask = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
            return Bits::from_word(n, ((x << k) | (x >> (n - k))) & mask);
        }
        let mut out = self.shifted_up(k);
        out.union_with(&self.shifted_down(n - k));
        out
    }

    fn shifted_up(&self, k: usize) -> Bits {
        let mut out = Bits::new(self.len);
        let (ws, bs) = (k / WORD, k % WORD);
        let nw = self.words.len();
        for i in (ws..nw).rev() {
            let mut v = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                v |= self.words[i - ws - 1] >> (WORD - bs);
            }
            out.words[i] = v;
        }
        out.trim();
        out
    }

    fn shifted_down(&self, k: usize) -> Bits {
        let mut out = Bits::new(self.len);
        let (ws, bs) = (k / WORD, k % WORD);
        let nw = self.words.len();
        for i in 0..nw.saturating_sub(ws) {
            let mut v = self.words[i + ws] >> bs;
            if bs > 0 && i + ws + 1 < nw {
                v |= self.words[i + ws + 1] << (WORD - bs);
            }
            out.words[i] = v;
        }
        out
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
                let t = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + t);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl Ord for Bits {
    /// Lexicographic on the sorted member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
