//! Finite multisets.

use std::collections::BTreeMap;

/// A finite multiset; elements with multiplicity zero are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
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

impl<T: Ord + Clone> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: T) -> Self {
        let mut m = Self::new();
        m.add(x, 1);
        m
    }

    pub fn add(&mut self, x: T, k: usize) {
        if k > 0 {
            *self.counts.entry(x).or_insert(0) += k;
        }
    }

    /// Removes one copy; false if `x` was absent.
    pub fn remove_one(&mut self, x: &T) -> bool {
        match self.counts.get_mut(x) {
            Some(c) if *c > 1 => {
                *c -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(x);
                true
            }
            None => false,
        }
    }

    pub fn get(&self, x: &T) -> usize {
        self.counts.get(x).copied().unwrap_or(0)
    }

    /// `|M|`: the number of elements counted with multiplicity.
    pub fn size(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.counts.keys()
    }

    /// `(x, M(x))` for `x` in the support, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, usize)> {
        self.counts.iter().map(|(x, &c)| (x, c))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (x, c) in other.iter() {
            m.add(x.clone(), c);
        }
        m
    }

    /// `f(M)(y) = Σ_{f(x) = y} M(x)`.
    pub fn image<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> Multiset<U> {
        let mut m = Multiset::new();
        for (x, c) in self.iter() {
            m.add(f(x), c);
        }
        m
    }
}

impl<T: Ord + Clone> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.add(x, 1);
        }
        m
    }
}

impl<S: Ord + Clone> Multiset<S> {
    /// `‖M‖ = Σ M(w)·|w|`.
    pub fn total_length<X>(&self) -> usize
    where
        S: AsRef<[X]>,
    {
        self.iter().map(|(w, c)| c * w.as_ref().len()).sum()
    }

    /// `‖M‖_a = Σ M(w)·|w|_a`.
    pub fn total_length_by<X: PartialEq>(&self, a: &X) -> usize
    where
        S: AsRef<[X]>,
    {
        self.iter()
            .map(|(w, c)| c * w.as_ref().iter().filter(|x| *x == a).count())
            .sum()
    }
}
