//! Multilinear maps stored by their values on basis words.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::scalar::{Scalar, Vector};

pub type Word = Vec<usize>;

/// A linear combination of basis words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordSum(BTreeMap<Word, Scalar>);

impl WordSum {
    pub fn new() -> Self {
        Self(BTreeMap::new())
    }

    pub fn single(word: Word, c: Scalar) -> Self {
        let mut s = Self::new();
        s.add(word, &c);
        s
    }

    pub fn add(&mut self, word: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(word.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&word);
        }
    }

    pub fn add_scaled(&mut self, other: &WordSum, c: &Scalar) {
        for (w, x) in &other.0 {
            self.add(w.clone(), &(x * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.0.iter()
    }

    pub fn get(&self, w: &[usize]) -> Scalar {
        self.0.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation product of two word sums.
    pub fn concat(&self, other: &WordSum) -> WordSum {
        let mut out = WordSum::new();
        for (u, a) in &self.0 {
            for (v, b) in &other.0 {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add(w, &(a * b));
            }
        }
        out
    }
}

/// A multilinear map of fixed arity, `word -> vector`, zero where absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseTensor(BTreeMap<Word, Vector>);

impl SparseTensor {
    pub fn new() -> Self {
        Self(BTreeMap::new())
    }

    pub fn get(&self, w: &[usize]) -> Option<&Vector> {
        self.0.get(w)
    }

    pub fn eval(&self, w: &[usize]) -> Vector {
        self.0.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&mut self, w: Word, v: &Vector, c: &Scalar) {
        if c.is_zero() || v.is_zero() {
            return;
        }
        let e = self.0.entry(w.clone()).or_default();
        e.add_scaled(v, c);
        if e.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn set(&mut self, w: Word, v: Vector) {
        if v.is_zero() {
            self.0.remove(&w);
        } else {
            self.0.insert(w, v);
        }
    }

    pub fn add_term(&mut self, w: Word, out: usize, c: &Scalar) {
        self.add(w, &Vector::basis(out), c);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Vector)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Extends linearly to a word sum.
    pub fn apply(&self, s: &WordSum) -> Vector {
        let mut out = Vector::new();
        for (w, c) in s.iter() {
            if let Some(v) = self.0.get(w) {
                out.add_scaled(v, c);
            }
        }
        out
    }
}

/// All words of length `k` over `0..dim`, in lexicographic order.
pub fn words(dim: usize, k: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * dim);
        for w in &out {
            for i in 0..dim {
                let mut w2 = w.clone();
                w2.push(i);
                next.push(w2);
            }
        }
        out = next;
    }
    out
}

/// All words of length `k` whose letter degrees sum to `target`.
pub fn words_of_degree(degrees: &[i64], k: usize, target: i64) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(degrees: &[i64], k: usize, left: i64, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for (i, d) in degrees.iter().enumerate() {
            cur.push(i);
            go(degrees, k, left - d, cur, out);
            cur.pop();
        }
    }
    go(degrees, k, target, &mut cur, &mut out);
    out
}

/// All ordered splittings of `k` into `r` positive parts.
pub fn compositions(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in 1..=left.saturating_sub(parts - 1) {
            cur.push(p);
            go(left - p, parts - 1, cur, out);
            cur.pop();
        }
    }
    go(k, r, &mut Vec::new(), &mut out);
    out
}
