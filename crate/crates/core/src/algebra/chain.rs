//! Integer combinations of tensor words over a basis.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::scalar::Scalar;

/// A tensor word: one basis index per tensor factor.
pub type Word = Vec<usize>;

/// Finite integer combination of tensor words, kept free of zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorChain<T> {
    terms: BTreeMap<Word, T>,
}

impl<T> Default for TensorChain<T> {
    fn default() -> Self {
        TensorChain { terms: BTreeMap::new() }
    }
}

impl<T: Scalar> TensorChain<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, T::one())
    }

    pub fn term(w: Word, c: T) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    /// The empty word with coefficient `c` (an element of the ground ring).
    pub fn scalar(c: T) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &T) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn coefficient(&self, w: &[usize]) -> T {
        self.terms.get(w).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &T)> {
        self.terms.iter()
    }

    /// Keeps only the words accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Word) -> bool) -> Self {
        TensorChain { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Rewrites every word through `f` (which may also flip signs or drop the word).
    pub fn map_words(&self, mut f: impl FnMut(&Word) -> Option<(Word, T)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            if let Some((nw, s)) = f(w) {
                out.add_term(nw, s * c.clone());
            }
        }
        out
    }
}

impl<T: Scalar> FromIterator<(Word, T)> for TensorChain<T> {
    fn from_iter<I: IntoIterator<Item = (Word, T)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in iter {
            out.add_term(w, c);
        }
        out
    }
}

impl<T: Scalar> Add for &TensorChain<T> {
    type Output = TensorChain<T>;
    fn add(self, rhs: &TensorChain<T>) -> TensorChain<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, &T::one());
        out
    }
}

impl<T: Scalar> Sub for &TensorChain<T> {
    type Output = TensorChain<T>;
    fn sub(self, rhs: &TensorChain<T>) -> TensorChain<T> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-T::one());
        out
    }
}

impl<T: Scalar> Neg for &TensorChain<T> {
    type Output = TensorChain<T>;
    fn neg(self) -> TensorChain<T> {
        self.scale(&-T::one())
    }
}
