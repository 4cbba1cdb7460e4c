//! Bitset of points of a finite space.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{input, Result};

const WORD: usize = 64;

/// A subset of the points `0..n` of a finite space with ambient size `n`.
///
/// Ordering is lexicographic on the ascending member lists, which is the
/// order used by the JSON encoding of open families.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    words: SmallVec<[u64; 2]>,
}

impl PointSet {
    pub fn empty(n: usize) -> Self {
        PointSet {
            n,
            words: SmallVec::from_elem(0, n.div_ceil(WORD)),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let hi = (lo + WORD).min(n);
            *w = if hi - lo == WORD { u64::MAX } else { (1u64 << (hi - lo)) - 1 };
        }
        s
    }

    pub fn singleton(n: usize, p: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(p);
        s
    }

    /// Builds a set from explicit members, rejecting out-of-range points.
    pub fn from_points(n: usize, points: &[usize]) -> Result<Self> {
        let mut s = Self::empty(n);
        for &p in points {
            if p >= n {
                return Err(input(format!("point {p} out of range for a {n}-point space")));
            }
            s.insert(p);
        }
        Ok(s)
    }

    /// Interprets the low `n` bits of `mask` as member flags (`n <= 64`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= WORD, "from_mask needs n <= 64");
        let mut s = Self::empty(n);
        if n > 0 {
            let keep = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
            s.words[0] = mask & keep;
        }
        s
    }

    /// Low word of the set; only meaningful when `n <= 64`.
    pub fn to_mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, p: usize) {
        assert!(p < self.n, "point {p} out of range {}", self.n);
        self.words[p / WORD] |= 1 << (p % WORD);
    }

    pub fn remove(&mut self, p: usize) {
        assert!(p < self.n, "point {p} out of range {}", self.n);
        self.words[p / WORD] &= !(1 << (p % WORD));
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.n && self.words[p / WORD] >> (p % WORD) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.n)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        out
    }

    pub fn complement(&self) -> PointSet {
        Self::full(self.n).difference(self)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_across_word_boundary() {
        let s = PointSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(s.contains(69));
        assert!(!s.contains(70));
        assert!(s.complement().is_empty());
    }

    #[test]
    fn lexicographic_order_on_members() {
        let a = PointSet::from_points(3, &[0, 1, 2]).unwrap();
        let b = PointSet::from_points(3, &[0, 2]).unwrap();
        let c = PointSet::from_points(3, &[1]).unwrap();
        let e = PointSet::empty(3);
        let mut v = vec![c.clone(), b.clone(), e.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![e, a, b, c]);
    }

    #[test]
    fn out_of_range_point_is_input_error() {
        assert!(PointSet::from_points(2, &[2]).is_err());
    }
}
