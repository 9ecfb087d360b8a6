//! A∞-bimodules over a fixed A∞-algebra.

mod map;

pub use map::{
    check_bimodule_map, compose_bimodule_maps, dual_bimodule_map, induced_map, BimoduleMap,
};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::ainfty::{check_ainfty, fhat, AInftyAlgebra, AInftyMorphism};
use crate::error::{Error, Result};
use crate::graded::{is_odd, sign, words, GradedBasis, Scalar, SparseTensor, Vector, Word};
use crate::report::RelationReport;

/// `a_1 ... a_k ⊗ v ⊗ b_1 ... b_l` with `v` in the module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModWord {
    pub left: Word,
    pub v: usize,
    pub right: Word,
}

impl ModWord {
    pub fn new(left: &[usize], v: usize, right: &[usize]) -> Self {
        Self {
            left: left.to_vec(),
            v,
            right: right.to_vec(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.left.len(), self.right.len())
    }

    /// Flat key `left ++ [v] ++ right` for storage in a [`SparseTensor`].
    pub fn key(&self) -> Word {
        let mut w = self.left.clone();
        w.push(self.v);
        w.extend_from_slice(&self.right);
        w
    }

    pub fn render(&self, algebra: &GradedBasis, module: &GradedBasis) -> String {
        let mut parts: Vec<String> = self
            .left
            .iter()
            .map(|i| algebra.name(*i).to_string())
            .collect();
        parts.push(format!("[{}]", module.name(self.v)));
        parts.extend(self.right.iter().map(|i| algebra.name(*i).to_string()));
        parts.join(" ")
    }
}

/// Formal sum of module words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModSum(BTreeMap<ModWord, Scalar>);

impl ModSum {
    pub fn new() -> Self {
        Self(BTreeMap::new())
    }

    pub fn add(&mut self, w: ModWord, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(w.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModWord, &Scalar)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// All module words with `k + l <= n`.
pub fn mod_words(dim_a: usize, dim_m: usize, n: usize) -> Vec<ModWord> {
    let mut out = Vec::new();
    for total in 0..=n {
        for k in 0..=total {
            let l = total - k;
            for left in words(dim_a, k) {
                for v in 0..dim_m {
                    for right in words(dim_a, l) {
                        out.push(ModWord {
                            left: left.clone(),
                            v,
                            right,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Operations `b_{k,l}` of shifted degree one, for `k + l <= max_arity`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bimodule {
    algebra: AInftyAlgebra,
    module: GradedBasis,
    acts: BTreeMap<(usize, usize), SparseTensor>,
    max_arity: usize,
}

impl Bimodule {
    pub fn new(algebra: AInftyAlgebra, module: GradedBasis, max_arity: usize) -> Self {
        Self {
            algebra,
            module,
            acts: BTreeMap::new(),
            max_arity,
        }
    }

    pub fn algebra(&self) -> &AInftyAlgebra {
        &self.algebra
    }

    pub fn module(&self) -> &GradedBasis {
        &self.module
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn acts(&self) -> &BTreeMap<(usize, usize), SparseTensor> {
        &self.acts
    }

    pub fn eval(&self, w: &ModWord) -> Vector {
        self.acts
            .get(&w.shape())
            .map(|t| t.eval(&w.key()))
            .unwrap_or_default()
    }

    pub fn apply(&self, s: &ModSum) -> Vector {
        let mut out = Vector::new();
        for (w, c) in s.iter() {
            if let Some(v) = self.acts.get(&w.shape()).and_then(|t| t.get(&w.key())) {
                out.add_scaled(v, c);
            }
        }
        out
    }

    /// Drops all operations with `k + l > n`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.max_arity = n.min(self.max_arity);
        out.acts.retain(|(k, l), _| k + l <= n);
        out
    }

    fn shifted_word(&self, w: &ModWord) -> i64 {
        let a = self.algebra.basis();
        a.word_shifted(&w.left) + self.module.shifted(w.v) + a.word_shifted(&w.right)
    }

    fn check_entry(&self, w: &ModWord, output: usize) -> Result<()> {
        let (k, l) = w.shape();
        if k + l > self.max_arity {
            return Err(Error::Malformed(format!(
                "b_{{{k},{l}}} exceeds max_arity {}",
                self.max_arity
            )));
        }
        let (da, dm) = (self.algebra.dim(), self.module.dim());
        if output >= dm || w.v >= dm || w.left.iter().chain(&w.right).any(|i| *i >= da) {
            return Err(Error::Malformed("basis index out of range".into()));
        }
        let want = 1 + self.shifted_word(w);
        if self.module.shifted(output) != want {
            return Err(Error::DegreeRule(format!(
                "b_{{{k},{l}}}({}) -> {}: shifted output degree must be {want}",
                w.render(self.algebra.basis(), &self.module),
                self.module.name(output)
            )));
        }
        Ok(())
    }

    pub fn add_entry(&mut self, w: &ModWord, output: usize, c: &Scalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        self.check_entry(w, output)?;
        let t = self.acts.entry(w.shape()).or_default();
        t.add_term(w.key(), output, c);
        if t.is_zero() {
            self.acts.remove(&w.shape());
        }
        Ok(())
    }

    pub fn set_value(&mut self, w: &ModWord, v: Vector) -> Result<()> {
        for (o, _) in v.iter() {
            self.check_entry(w, o)?;
        }
        let t = self.acts.entry(w.shape()).or_default();
        t.set(w.key(), v);
        if t.is_zero() {
            self.acts.remove(&w.shape());
        }
        Ok(())
    }

    /// The bar coderivation `b̂` on a module word: `m` on a block of the left
    /// factors, `b` on a block straddling the module slot, `m` on a block of the
    /// right factors, each with the Koszul sign of passing what lies to its left.
    pub fn bar(&self, w: &ModWord) -> ModSum {
        let a = &self.algebra;
        let ab = a.basis();
        let (k, l) = w.shape();
        let mut out = ModSum::new();
        let mut prefix = 0i64;
        for s in 0..k {
            let c = sign(is_odd(prefix));
            for (j, t) in a.ops().range(1..=k - s) {
                if let Some(v) = t.get(&w.left[s..s + j]) {
                    for (o, x) in v.iter() {
                        let mut left = w.left[..s].to_vec();
                        left.push(o);
                        left.extend_from_slice(&w.left[s + j..]);
                        out.add(
                            ModWord {
                                left,
                                v: w.v,
                                right: w.right.clone(),
                            },
                            &(x * &c),
                        );
                    }
                }
            }
            prefix += ab.shifted(w.left[s]);
        }
        let mut prefix = 0i64;
        for p in (0..=k).rev() {
            // p factors from the left enter b, starting at position k - p
            let start = k - p;
            let c = sign(is_odd(prefix));
            for q in 0..=l {
                let Some(t) = self.acts.get(&(p, q)) else {
                    continue;
                };
                let inner = ModWord::new(&w.left[start..], w.v, &w.right[..q]);
                if let Some(v) = t.get(&inner.key()) {
                    for (o, x) in v.iter() {
                        out.add(
                            ModWord {
                                left: w.left[..start].to_vec(),
                                v: o,
                                right: w.right[q..].to_vec(),
                            },
                            &(x * &c),
                        );
                    }
                }
            }
            if start < k {
                prefix += ab.shifted(w.left[start]);
            }
        }
        let mut prefix = ab.word_shifted(&w.left) + self.module.shifted(w.v);
        for s in 0..l {
            let c = sign(is_odd(prefix));
            for (j, t) in a.ops().range(1..=l - s) {
                if let Some(v) = t.get(&w.right[s..s + j]) {
                    for (o, x) in v.iter() {
                        let mut right = w.right[..s].to_vec();
                        right.push(o);
                        right.extend_from_slice(&w.right[s + j..]);
                        out.add(
                            ModWord {
                                left: w.left.clone(),
                                v: w.v,
                                right,
                            },
                            &(x * &c),
                        );
                    }
                }
            }
            prefix += ab.shifted(w.right[s]);
        }
        out
    }
}

pub(crate) fn require_algebra(a: &AInftyAlgebra, n: usize) -> Result<()> {
    let rep = check_ainfty(a, n);
    if rep.pass() {
        Ok(())
    } else {
        Err(Error::precondition(
            "algebra",
            "underlying A-infinity relation fails",
        ))
    }
}

/// Checks `b ∘ b̂ = 0` on every module word with `k + l <= n`.
pub fn check_bimodule(m: &Bimodule, n: usize) -> Result<RelationReport> {
    require_algebra(m.algebra(), n)?;
    let mut rep = RelationReport::new("bimodule relations");
    for w in mod_words(m.algebra.dim(), m.module.dim(), n) {
        let defect = m.apply(&m.bar(&w));
        let (k, l) = w.shape();
        rep.record(
            k + l,
            defect.is_zero(),
            || w.render(m.algebra.basis(), &m.module),
            || defect.to_string(),
        );
    }
    Ok(rep)
}

/// `b_{k,l} = m_{k+l+1}` on the algebra itself.
pub fn diagonal_bimodule(a: &AInftyAlgebra) -> Bimodule {
    let n = a.max_arity().saturating_sub(1);
    let mut m = Bimodule::new(a.clone(), a.basis().clone(), n);
    for (arity, t) in a.ops() {
        if *arity > n + 1 {
            continue;
        }
        for (w, v) in t.iter() {
            for k in 0..*arity {
                let mw = ModWord::new(&w[..k], w[k], &w[k + 1..]);
                m.set_value(&mw, v.clone())
                    .expect("diagonal respects degrees");
            }
        }
    }
    m
}

/// Grading of the dual module: the pairing has unshifted degree `alpha`, so
/// the dual of a basis vector of shifted degree `d` sits in shifted degree `offset() - d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualPlacement {
    pub alpha: i64,
}

impl DualPlacement {
    pub fn new(alpha: i64) -> Self {
        Self { alpha }
    }

    /// Sum of shifted degrees of two basis vectors paired nontrivially.
    pub fn offset(&self) -> i64 {
        -(self.alpha + 2)
    }
}

/// Dual graded basis `e_j*` for a given offset.
pub fn dual_basis(module: &GradedBasis, placement: DualPlacement) -> GradedBasis {
    let c = placement.offset();
    GradedBasis::new(
        (0..module.dim()).map(|j| (format!("{}*", module.name(j)), c - module.shifted(j) + 1)),
    )
    .expect("dual names are distinct")
}

/// How to read the printed `|x_{k+1}|` in the dual bimodule sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum DualSignReading {
    /// Every degree carries the prime.
    AllShifted,
    /// `|x_{k+1}|` is the unshifted degree.
    #[allow(dead_code)]
    FirstRightUnshifted,
}

pub(crate) const DUAL_READING: DualSignReading = DualSignReading::AllShifted;

/// Dual of an arbitrary bimodule:
/// `b*_{k,l}(x, v*, y)(w) = (-1)^{1 + K} v*(b_{l,k}(y, w, x))` with
/// `K = |v*|' + (Σ|x|')(|v*|' + Σ|y|' + |w|')`.
pub fn dual_of(m: &Bimodule, placement: DualPlacement) -> Bimodule {
    dual_with_reading(m, placement, DUAL_READING)
}

pub(crate) fn dual_with_reading(
    m: &Bimodule,
    placement: DualPlacement,
    reading: DualSignReading,
) -> Bimodule {
    let ab = m.algebra.basis();
    let dual = dual_basis(&m.module, placement);
    let mut out = Bimodule::new(m.algebra.clone(), dual.clone(), m.max_arity);
    for ((l, _), t) in &m.acts {
        for (key, v) in t.iter() {
            // stored as b_{l,k}(y, e_w, x)
            let y = &key[..*l];
            let wi = key[*l];
            let x = &key[l + 1..];
            let sx = ab.word_shifted(x);
            let sy = ab.word_shifted(y);
            for (j, coeff) in v.iter() {
                let vs = dual.shifted(j);
                let mut e = 1 + vs + sx * (vs + sy + m.module.shifted(wi));
                if reading == DualSignReading::FirstRightUnshifted && !y.is_empty() {
                    e += sx;
                }
                let c = if is_odd(e) {
                    -coeff.clone()
                } else {
                    coeff.clone()
                };
                out.add_entry(&ModWord::new(x, j, y), wi, &c)
                    .expect("dual respects degrees");
            }
        }
    }
    out
}

/// The canonical bimodule structure on the dual of `A`.
pub fn dual_bimodule(a: &AInftyAlgebra, placement: DualPlacement) -> Bimodule {
    dual_of(&diagonal_bimodule(a), placement)
}

/// `B` as a bimodule over `A` along `f`: `b_{k,l}(a, v, b) = m^B(f̂(a) ⊗ v ⊗ f̂(b))`.
pub fn induced_bimodule(
    b: &AInftyAlgebra,
    a: &AInftyAlgebra,
    f: &AInftyMorphism,
) -> Result<Bimodule> {
    if f.source() != a.basis() || f.target() != b.basis() {
        return Err(Error::BasisMismatch(
            "morphism bases differ from the given algebras".into(),
        ));
    }
    let n = b.max_arity().min(f.max_arity()).saturating_sub(1);
    let mut out = Bimodule::new(a.clone(), b.basis().clone(), n);
    for w in mod_words(a.dim(), b.dim(), n) {
        let left = fhat(f, &w.left);
        let right = fhat(f, &w.right);
        let mut v = Vector::new();
        for (u1, c1) in left.iter() {
            for (u2, c2) in right.iter() {
                let mut u = u1.clone();
                u.push(w.v);
                u.extend_from_slice(u2);
                v.add_scaled(&b.eval(&u), &(c1 * c2));
            }
        }
        out.set_value(&w, v)?;
    }
    Ok(out)
}

impl fmt::Display for ModWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} [{}] {:?}", self.left, self.v, self.right)
    }
}

#[cfg(test)]
mod tests;
