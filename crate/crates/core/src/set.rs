//! Fixed-width bit sets over the states of one game graph.

use std::fmt;

use crate::graph::StateId;

/// A set of states stored as a bit vector of width `|Q|`.
///
/// Binary operations require both operands to have the same width and panic
/// otherwise; the checked entry points in [`crate::pre`] report mismatches as
/// errors instead.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    width: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(width: usize) -> Self {
        StateSet {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = StateSet {
            width,
            words: vec![u64::MAX; width.div_ceil(64)],
        };
        s.trim();
        s
    }

    pub fn from_states<I: IntoIterator<Item = StateId>>(width: usize, states: I) -> Self {
        let mut s = Self::empty(width);
        for q in states {
            s.insert(q);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, q: StateId) -> bool {
        q < self.width && self.words[q / 64] & (1 << (q % 64)) != 0
    }

    /// Inserts `q`, returning whether it was newly added.
    pub fn insert(&mut self, q: StateId) -> bool {
        assert!(q < self.width, "state {q} outside set width {}", self.width);
        let fresh = !self.contains(q);
        self.words[q / 64] |= 1 << (q % 64);
        fresh
    }

    pub fn remove(&mut self, q: StateId) {
        if q < self.width {
            self.words[q / 64] &= !(1 << (q % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + bit)
            })
        })
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.check(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.check(other);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        self.check(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> StateSet {
        let mut s = StateSet {
            width: self.width,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let tail = self.width % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    fn check(&self, other: &StateSet) {
        assert_eq!(
            self.width, other.width,
            "state set width mismatch ({} vs {})",
            self.width, other.width
        );
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_over_word_boundary() {
        let a = StateSet::from_states(70, [0, 63, 64, 69]);
        let b = StateSet::from_states(70, [63, 65]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), [0, 63, 64, 65, 69]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), [63]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), [0, 64, 69]);
        assert_eq!(a.complement().len(), 66);
        assert!(StateSet::full(70).is_full());
        assert_eq!(StateSet::full(70).complement(), StateSet::empty(70));
    }

    #[test]
    fn subset_and_intersects() {
        let a = StateSet::from_states(5, [1, 2]);
        let b = StateSet::from_states(5, [1, 2, 4]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(a.intersects(&b));
        assert!(!a.intersects(&StateSet::from_states(5, [0])));
    }

    #[test]
    #[should_panic(expected = "width mismatch")]
    fn width_mismatch_panics() {
        StateSet::empty(3).union(&StateSet::empty(4));
    }
}
