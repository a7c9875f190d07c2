//! Bitset tournaments.

use std::fmt;

use crate::error::{Error, Result};

/// Iterator over the set bits of a bitset row, in increasing order.
#[derive(Clone, Debug)]
pub struct Bits<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Bits<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        Bits { words, idx: 0, cur: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for Bits<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

pub(crate) fn popcount(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A complete oriented graph on `n` vertices.
///
/// Each vertex keeps two bitset rows: the vertices it beats and the vertices
/// beating it. `beats` is a single bit test; neighbourhood intersections work a
/// machine word at a time.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    words: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
}

impl Tournament {
    /// Tournament on `n` vertices where, for `i < j`, `i` beats `j` iff
    /// `forward(i, j)`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let mut t = Tournament::empty_rows(n);
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    t.set(i, j);
                } else {
                    t.set(j, i);
                }
            }
        }
        t
    }

    fn empty_rows(n: usize) -> Self {
        let words = words_for(n);
        Tournament { n, words, out: vec![0; n * words], inn: vec![0; n * words] }
    }

    fn set(&mut self, winner: usize, loser: usize) {
        let w = self.words;
        self.out[winner * w + loser / 64] |= 1 << (loser % 64);
        self.inn[loser * w + winner / 64] |= 1 << (winner % 64);
    }

    fn clear(&mut self, winner: usize, loser: usize) {
        let w = self.words;
        self.out[winner * w + loser / 64] &= !(1 << (loser % 64));
        self.inn[loser * w + winner / 64] &= !(1 << (winner % 64));
    }

    /// Builds a tournament from an explicit arc list, checking that every
    /// unordered pair is oriented exactly once.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut t = Tournament::empty_rows(n);
        for &(u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::OutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if t.beats(u, v) || t.beats(v, u) {
                return Err(Error::DuplicatePair(u.min(v), u.max(v)));
            }
            t.set(u, v);
        }
        for i in 0..n {
            for j in i + 1..n {
                if !t.beats(i, j) && !t.beats(j, i) {
                    return Err(Error::MissingPair(i, j));
                }
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Words per bitset row.
    pub fn row_words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn beats(&self, u: usize, v: usize) -> bool {
        self.out[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Bitset of the vertices `u` beats.
    #[inline]
    pub fn out_row(&self, u: usize) -> &[u64] {
        &self.out[u * self.words..(u + 1) * self.words]
    }

    /// Bitset of the vertices beating `u`.
    #[inline]
    pub fn in_row(&self, u: usize) -> &[u64] {
        &self.inn[u * self.words..(u + 1) * self.words]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        popcount(self.out_row(u)) as usize
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.out_degree(u)).collect()
    }

    pub fn out_neighbors(&self, u: usize) -> Bits<'_> {
        Bits::new(self.out_row(u))
    }

    /// All arcs `(u, v)` with `u` beating `v`, ordered by the unordered pair.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (i + 1..self.n).map(move |j| if self.beats(i, j) { (i, j) } else { (j, i) })
        })
    }

    pub fn arc_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Bitset with every vertex set.
    pub fn full_set(&self) -> Vec<u64> {
        let mut s = vec![u64::MAX; self.words];
        if !self.n.is_multiple_of(64) {
            if let Some(last) = s.last_mut() {
                *last = (1u64 << (self.n % 64)) - 1;
            }
        }
        s
    }

    /// Same vertex set with every arc reversed.
    pub fn reverse(&self) -> Tournament {
        Tournament { n: self.n, words: self.words, out: self.inn.clone(), inn: self.out.clone() }
    }

    /// Sub-tournament induced on `subset`; vertex order follows the sorted subset.
    pub fn induced(&self, subset: &[usize]) -> Result<Tournament> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&bad) = s.iter().find(|&&v| v >= self.n) {
            return Err(Error::OutOfRange { vertex: bad, n: self.n });
        }
        Ok(self.induced_ordered(&s))
    }

    /// Sub-tournament on `order` where new vertex `i` is `order[i]`. The entries
    /// must be distinct and in range.
    pub(crate) fn induced_ordered(&self, order: &[usize]) -> Tournament {
        Tournament::from_fn(order.len(), |i, j| self.beats(order[i], order[j]))
    }

    /// Relabels vertices so that new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Tournament> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(Error::BadParameter(format!(
                "permutation has length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadParameter("not a permutation".into()));
            }
        }
        Ok(self.induced_ordered(perm))
    }

    /// Reverses the arc `u -> v`.
    pub(crate) fn flip_in_place(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::OutOfRange { vertex: u.max(v), n: self.n });
        }
        if !self.beats(u, v) {
            return Err(Error::NotAnArc(u, v));
        }
        self.clear(u, v);
        self.set(v, u);
        Ok(())
    }

    pub fn is_transitive(&self) -> bool {
        let mut degs = self.out_degrees();
        degs.sort_unstable();
        degs.iter().enumerate().all(|(i, &d)| d == i)
    }

    /// Orientation bits in upper-triangular row-major order, `true` meaning `i -> j`.
    pub fn upper_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| self.beats(i, j)))
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = self.upper_bits().map(|b| if b { '1' } else { '0' }).collect();
        write!(f, "Tournament({}; {})", self.n, bits)
    }
}
