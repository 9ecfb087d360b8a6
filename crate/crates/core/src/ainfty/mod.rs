//! A∞-algebras in the shifted (Koszul-only) sign convention.

mod morphism;
mod transfer;

pub use morphism::{
    check_morphism, compose_morphisms, fhat, pullback_algebra, pushforward_algebra, tensor_vectors,
    AInftyMorphism,
};
pub use transfer::{minimal_model, MinimalModel};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{is_odd, words, GradedBasis, Scalar, SparseTensor, Vector, WordSum};
use crate::report::RelationReport;

/// Which sign convention a set of structure constants is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// Products on the unshifted space (DGA-style signs).
    Ns,
    /// Operations of degree one on the shifted space.
    Shifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    NsToShifted,
    ShiftedToNs,
}

/// Finite A∞-algebra: operations `m_k` for `1 <= k <= max_arity`, shifted convention.
#[derive(Clone, Debug, PartialEq)]
pub struct AInftyAlgebra {
    basis: GradedBasis,
    ops: BTreeMap<usize, SparseTensor>,
    max_arity: usize,
}

impl AInftyAlgebra {
    pub fn new(basis: GradedBasis, max_arity: usize) -> Self {
        Self {
            basis,
            ops: BTreeMap::new(),
            max_arity,
        }
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn ops(&self) -> &BTreeMap<usize, SparseTensor> {
        &self.ops
    }

    pub fn op(&self, k: usize) -> Option<&SparseTensor> {
        self.ops.get(&k)
    }

    /// `m_k` on a basis word; zero beyond the stored arities.
    pub fn eval(&self, word: &[usize]) -> Vector {
        self.ops
            .get(&word.len())
            .map(|t| t.eval(word))
            .unwrap_or_default()
    }

    /// Applies `m = Σ_k m_k` to a formal sum of words.
    pub fn apply(&self, s: &WordSum) -> Vector {
        let mut out = Vector::new();
        for (w, c) in s.iter() {
            if let Some(v) = self.ops.get(&w.len()).and_then(|t| t.get(w)) {
                out.add_scaled(v, c);
            }
        }
        out
    }

    fn check_entry(&self, inputs: &[usize], output: usize) -> Result<()> {
        let k = inputs.len();
        if k == 0 {
            return Err(Error::DegreeRule(
                "m_0 must vanish for an unfiltered algebra".into(),
            ));
        }
        if k > self.max_arity {
            return Err(Error::Malformed(format!(
                "arity {k} exceeds max_arity {}",
                self.max_arity
            )));
        }
        let n = self.dim();
        if output >= n || inputs.iter().any(|i| *i >= n) {
            return Err(Error::Malformed("basis index out of range".into()));
        }
        let want = 1 + self.basis.word_shifted(inputs);
        if self.basis.shifted(output) != want {
            return Err(Error::DegreeRule(format!(
                "m_{k}({}) -> {}: shifted output degree must be 1 + sum of shifted input degrees = {want}",
                self.basis.render_word(inputs),
                self.basis.name(output)
            )));
        }
        Ok(())
    }

    /// Adds `c` to the coefficient of `e_output` in `m_k(inputs)`.
    pub fn add_entry(&mut self, inputs: &[usize], output: usize, c: &Scalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        self.check_entry(inputs, output)?;
        self.ops
            .entry(inputs.len())
            .or_default()
            .add_term(inputs.to_vec(), output, c);
        if self.ops[&inputs.len()].is_zero() {
            self.ops.remove(&inputs.len());
        }
        Ok(())
    }

    /// Sets `m_k(inputs)` to `v`, checking the degree rule on every term.
    pub fn set_value(&mut self, inputs: &[usize], v: Vector) -> Result<()> {
        for (o, _) in v.iter() {
            self.check_entry(inputs, o)?;
        }
        let t = self.ops.entry(inputs.len()).or_default();
        t.set(inputs.to_vec(), v);
        if t.is_zero() {
            self.ops.remove(&inputs.len());
        }
        Ok(())
    }

    /// Drops all operations of arity above `n`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.max_arity = n.min(self.max_arity);
        out.ops.retain(|k, _| *k <= n);
        out
    }

    pub fn with_max_arity(mut self, n: usize) -> Self {
        self.max_arity = n;
        self.ops.retain(|k, _| *k <= n);
        self
    }

    /// Bar coderivation `b̂` on a word: every consecutive block replaced by `m` of it.
    pub fn bar(&self, word: &[usize]) -> WordSum {
        let mut out = WordSum::new();
        bar_into(self, word, &Scalar::from_integer(1.into()), &mut out);
        out
    }
}

pub(crate) fn bar_into(a: &AInftyAlgebra, word: &[usize], c: &Scalar, out: &mut WordSum) {
    let n = word.len();
    let mut prefix_deg = 0i64;
    for i in 0..n {
        let sgn = if is_odd(prefix_deg) {
            -c.clone()
        } else {
            c.clone()
        };
        for (k, t) in a.ops.range(1..=n - i) {
            if let Some(v) = t.get(&word[i..i + k]) {
                for (o, x) in v.iter() {
                    let mut w = Vec::with_capacity(n - k + 1);
                    w.extend_from_slice(&word[..i]);
                    w.push(o);
                    w.extend_from_slice(&word[i + k..]);
                    out.add(w, &(x * &sgn));
                }
            }
        }
        prefix_deg += a.basis.shifted(word[i]);
    }
}

/// Checks `m ∘ b̂ = 0` on every basis word of length at most `n`.
pub fn check_ainfty(a: &AInftyAlgebra, n: usize) -> RelationReport {
    let mut rep = RelationReport::new("A-infinity relations");
    for k in 1..=n {
        for w in words(a.dim(), k) {
            let defect = a.apply(&a.bar(&w));
            rep.record(
                k,
                defect.is_zero(),
                || a.basis().render_word(&w),
                || defect.to_string(),
            );
        }
    }
    rep
}

/// Sign relating the two conventions on an input word, from unshifted degrees:
/// `(-1)^{Σ_i (k-i)|x_i|}`.
pub fn convention_sign_odd(basis: &GradedBasis, word: &[usize]) -> bool {
    let k = word.len();
    let mut e = 0i64;
    for (i, x) in word.iter().enumerate() {
        e += (k - 1 - i) as i64 * basis.degree(*x);
    }
    is_odd(e)
}

/// Entrywise sign twist between the two conventions. The twist is its own inverse,
/// so both directions apply the same map.
pub fn convert_convention(a: &AInftyAlgebra, _direction: Direction) -> AInftyAlgebra {
    let mut out = AInftyAlgebra::new(a.basis.clone(), a.max_arity);
    for (k, t) in &a.ops {
        let mut nt = SparseTensor::new();
        for (w, v) in t.iter() {
            let c = crate::graded::sign(convention_sign_odd(&a.basis, w));
            nt.add(w.clone(), v, &c);
        }
        if !nt.is_zero() {
            out.ops.insert(*k, nt);
        }
    }
    out
}

/// Builds an algebra from entries written in either convention.
pub fn from_entries(
    basis: GradedBasis,
    max_arity: usize,
    convention: Convention,
    entries: &[(Vec<usize>, usize, Scalar)],
) -> Result<AInftyAlgebra> {
    let mut a = AInftyAlgebra::new(basis, max_arity);
    for (w, o, c) in entries {
        let c = match convention {
            Convention::Shifted => c.clone(),
            Convention::Ns => c * crate::graded::sign(convention_sign_odd(&a.basis, w)),
        };
        a.add_entry(w, *o, &c)?;
    }
    Ok(a)
}
