use std::collections::btree_map;
use std::collections::BTreeMap;

/// A finite multiset backed by an ordered map, so equal multisets have equal
/// representations and iterate in the same order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset<T: Ord> {
    counts: BTreeMap<T, usize>,
}

impl<T: Ord> Default for Multiset<T> {
    fn default() -> Self {
        Multiset {
            counts: BTreeMap::new(),
        }
    }
}

impl<T: Ord + std::fmt::Debug> std::fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(item: T) -> Self {
        let mut m = Self::new();
        m.insert(item);
        m
    }

    pub fn insert(&mut self, item: T) {
        self.insert_n(item, 1);
    }

    pub fn insert_n(&mut self, item: T, n: usize) {
        if n > 0 {
            *self.counts.entry(item).or_insert(0) += n;
        }
    }

    /// Removes `n` copies of `item`. Returns `false` (and leaves the multiset
    /// untouched) when fewer than `n` copies are present.
    pub fn remove_n(&mut self, item: &T, n: usize) -> bool {
        if n == 0 {
            return true;
        }
        match self.counts.get_mut(item) {
            Some(c) if *c > n => {
                *c -= n;
                true
            }
            Some(c) if *c == n => {
                self.counts.remove(item);
                true
            }
            _ => false,
        }
    }

    pub fn remove(&mut self, item: &T) -> bool {
        self.remove_n(item, 1)
    }

    /// Removes every copy of `item`, returning how many there were.
    pub fn remove_all(&mut self, item: &T) -> usize {
        self.counts.remove(item).unwrap_or(0)
    }

    pub fn count(&self, item: &T) -> usize {
        self.counts.get(item).copied().unwrap_or(0)
    }

    /// Total number of elements, with multiplicity.
    pub fn len(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Distinct elements with their multiplicities, in order.
    pub fn iter(&self) -> btree_map::Iter<'_, T, usize> {
        self.counts.iter()
    }

    /// Elements repeated according to their multiplicity.
    pub fn iter_expanded(&self) -> impl Iterator<Item = &T> + '_ {
        self.counts
            .iter()
            .flat_map(|(k, &n)| std::iter::repeat_n(k, n))
    }

    pub fn distinct(&self) -> impl Iterator<Item = &T> + '_ {
        self.counts.keys()
    }

    /// `self ⊆ other` with multiplicities.
    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        self.counts.iter().all(|(k, &n)| other.count(k) >= n)
    }

    pub fn add_all(&mut self, other: &Self) {
        for (k, &n) in other.iter() {
            self.insert_n(k.clone(), n);
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_all(other);
        out
    }

    /// `self - other`, or `None` when `other` is not contained in `self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        for (k, &n) in other.iter() {
            if !out.remove_n(k, n) {
                return None;
            }
        }
        Some(out)
    }

    pub fn scaled(&self, k: usize) -> Self {
        let counts = if k == 0 {
            BTreeMap::new()
        } else {
            self.counts.iter().map(|(x, &n)| (x.clone(), n * k)).collect()
        };
        Multiset { counts }
    }

    /// Largest `k` such that `k` copies of `pattern` fit in `self`.
    /// `None` for an empty pattern, whose multiplicity is undefined.
    pub fn count_submultiset(&self, pattern: &Self) -> Option<usize> {
        pattern
            .iter()
            .map(|(x, &n)| self.count(x) / n)
            .min()
    }

    pub fn retain(&mut self, mut f: impl FnMut(&T, usize) -> bool) {
        self.counts.retain(|k, n| f(k, *n));
    }

    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Multiset<U> {
        let mut out = Multiset::new();
        for (k, &n) in self.iter() {
            out.insert_n(f(k), n);
        }
        out
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl<T: Ord + Clone> Extend<T> for Multiset<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}
