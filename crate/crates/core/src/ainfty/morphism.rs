use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{check_ainfty, AInftyAlgebra};
use crate::error::{Error, Result};
use crate::graded::homology::{apply as apply_linear, LinearMap};
use crate::graded::linsolve::inverse;
use crate::graded::{words, GradedBasis, Scalar, SparseTensor, Vector, Word, WordSum};
use crate::report::RelationReport;

/// A∞-morphism components `f_k`, each of shifted degree zero.
#[derive(Clone, Debug, PartialEq)]
pub struct AInftyMorphism {
    source: GradedBasis,
    target: GradedBasis,
    comps: BTreeMap<usize, SparseTensor>,
    max_arity: usize,
}

impl AInftyMorphism {
    pub fn new(source: GradedBasis, target: GradedBasis, max_arity: usize) -> Self {
        Self {
            source,
            target,
            comps: BTreeMap::new(),
            max_arity,
        }
    }

    pub fn identity(basis: &GradedBasis, max_arity: usize) -> Self {
        let mut f = Self::new(basis.clone(), basis.clone(), max_arity);
        for i in 0..basis.dim() {
            f.add_entry(&[i], i, &Scalar::one())
                .expect("identity respects degrees");
        }
        f
    }

    /// Linear morphism with `f_1(e_j) = cols[j]`.
    pub fn linear(
        source: &GradedBasis,
        target: &GradedBasis,
        cols: &LinearMap,
        max_arity: usize,
    ) -> Result<Self> {
        let mut f = Self::new(source.clone(), target.clone(), max_arity);
        for (j, v) in cols.iter().enumerate() {
            f.set_value(&[j], v.clone())?;
        }
        Ok(f)
    }

    pub fn source(&self) -> &GradedBasis {
        &self.source
    }

    pub fn target(&self) -> &GradedBasis {
        &self.target
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn comps(&self) -> &BTreeMap<usize, SparseTensor> {
        &self.comps
    }

    pub fn comp(&self, k: usize) -> Option<&SparseTensor> {
        self.comps.get(&k)
    }

    pub fn eval(&self, word: &[usize]) -> Vector {
        self.comps
            .get(&word.len())
            .map(|t| t.eval(word))
            .unwrap_or_default()
    }

    /// `f = Σ f_k` applied to a formal sum of words.
    pub fn apply(&self, s: &WordSum) -> Vector {
        let mut out = Vector::new();
        for (w, c) in s.iter() {
            if let Some(v) = self.comps.get(&w.len()).and_then(|t| t.get(w)) {
                out.add_scaled(v, c);
            }
        }
        out
    }

    /// Columns of `f_1`.
    pub fn linear_part(&self) -> LinearMap {
        (0..self.source.dim()).map(|j| self.eval(&[j])).collect()
    }

    fn check_entry(&self, inputs: &[usize], output: usize) -> Result<()> {
        let k = inputs.len();
        if k == 0 || k > self.max_arity {
            return Err(Error::Malformed(format!(
                "morphism arity {k} outside 1..={}",
                self.max_arity
            )));
        }
        if output >= self.target.dim() || inputs.iter().any(|i| *i >= self.source.dim()) {
            return Err(Error::Malformed("basis index out of range".into()));
        }
        let want = self.source.word_shifted(inputs);
        if self.target.shifted(output) != want {
            return Err(Error::DegreeRule(format!(
                "f_{k}({}) -> {}: shifted output degree must equal {want}",
                self.source.render_word(inputs),
                self.target.name(output)
            )));
        }
        Ok(())
    }

    pub fn add_entry(&mut self, inputs: &[usize], output: usize, c: &Scalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        self.check_entry(inputs, output)?;
        self.comps
            .entry(inputs.len())
            .or_default()
            .add_term(inputs.to_vec(), output, c);
        if self.comps[&inputs.len()].is_zero() {
            self.comps.remove(&inputs.len());
        }
        Ok(())
    }

    pub fn set_value(&mut self, inputs: &[usize], v: Vector) -> Result<()> {
        for (o, _) in v.iter() {
            self.check_entry(inputs, o)?;
        }
        let t = self.comps.entry(inputs.len()).or_default();
        t.set(inputs.to_vec(), v);
        if t.is_zero() {
            self.comps.remove(&inputs.len());
        }
        Ok(())
    }

    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.max_arity = n.min(self.max_arity);
        out.comps.retain(|k, _| *k <= n);
        out
    }

    /// Inverse of `f_1`, as columns, if it is invertible.
    pub fn linear_inverse(&self) -> Option<LinearMap> {
        let n = self.source.dim();
        if n != self.target.dim() {
            return None;
        }
        let cols = self.linear_part();
        let m: Vec<Vec<Scalar>> = (0..n)
            .map(|i| (0..n).map(|j| cols[j].get(i)).collect())
            .collect();
        let inv = inverse(&m)?;
        Some(
            (0..n)
                .map(|j| Vector::from_dense(&(0..n).map(|i| inv[i][j].clone()).collect::<Vec<_>>()))
                .collect(),
        )
    }
}

/// Tensor product of vectors as a formal sum of words.
pub fn tensor_vectors(parts: &[Vector]) -> WordSum {
    let mut acc = WordSum::single(Vec::new(), Scalar::one());
    for v in parts {
        let mut next = WordSum::new();
        for (w, c) in acc.iter() {
            for (i, x) in v.iter() {
                let mut w2 = w.clone();
                w2.push(i);
                next.add(w2, &(c * x));
            }
        }
        acc = next;
    }
    acc
}

/// `f̂` on a word: the sum over all splittings into consecutive blocks of
/// `f_{i_1} ⊗ ... ⊗ f_{i_r}`. Degree-zero components carry no signs.
pub fn fhat(f: &AInftyMorphism, word: &[usize]) -> WordSum {
    let mut memo: BTreeMap<usize, WordSum> = BTreeMap::new();
    fhat_suffix(f, word, 0, &mut memo)
}

fn fhat_suffix(
    f: &AInftyMorphism,
    word: &[usize],
    start: usize,
    memo: &mut BTreeMap<usize, WordSum>,
) -> WordSum {
    if start == word.len() {
        return WordSum::single(Vec::new(), Scalar::one());
    }
    if let Some(s) = memo.get(&start) {
        return s.clone();
    }
    let mut out = WordSum::new();
    for (k, t) in f.comps.range(1..=word.len() - start) {
        let Some(v) = t.get(&word[start..start + k]) else {
            continue;
        };
        let rest = fhat_suffix(f, word, start + k, memo);
        for (o, c) in v.iter() {
            for (w, x) in rest.iter() {
                let mut w2 = Vec::with_capacity(w.len() + 1);
                w2.push(o);
                w2.extend_from_slice(w);
                out.add(w2, &(c * x));
            }
        }
    }
    memo.insert(start, out.clone());
    out
}

pub(crate) fn require(a: &AInftyAlgebra, n: usize, side: &str) -> Result<()> {
    let rep = check_ainfty(a, n);
    if rep.pass() {
        Ok(())
    } else {
        let at = rep
            .failures
            .first()
            .map(|x| format!("arity {} at {}", x.arity, x.at))
            .unwrap_or_default();
        Err(Error::precondition(
            side,
            format!("A-infinity relation fails ({at})"),
        ))
    }
}

fn require_bases(a: &AInftyAlgebra, b: &AInftyAlgebra, f: &AInftyMorphism) -> Result<()> {
    if a.basis() != f.source() || b.basis() != f.target() {
        return Err(Error::BasisMismatch(
            "morphism bases differ from the given algebras".into(),
        ));
    }
    Ok(())
}

/// Checks `f ∘ b̂_A = m_B ∘ f̂` on every basis word of length at most `n`.
pub fn check_morphism(
    a: &AInftyAlgebra,
    b: &AInftyAlgebra,
    f: &AInftyMorphism,
    n: usize,
) -> Result<RelationReport> {
    require_bases(a, b, f)?;
    require(a, n, "source")?;
    require(b, n, "target")?;
    let mut rep = RelationReport::new("A-infinity morphism relations");
    for k in 1..=n {
        for w in words(a.dim(), k) {
            let lhs = f.apply(&a.bar(&w));
            let rhs = b.apply(&fhat(f, &w));
            let defect = lhs.sub(&rhs);
            rep.record(
                k,
                defect.is_zero(),
                || a.basis().render_word(&w),
                || defect.to_string(),
            );
        }
    }
    Ok(rep)
}

/// `(g ∘ f)_k = Σ g_r (f_{i_1} ⊗ ... ⊗ f_{i_r})`.
pub fn compose_morphisms(g: &AInftyMorphism, f: &AInftyMorphism) -> Result<AInftyMorphism> {
    if f.target() != g.source() {
        return Err(Error::BasisMismatch(
            "target of the first morphism is not the source of the second".into(),
        ));
    }
    let n = f.max_arity.min(g.max_arity);
    let mut out = AInftyMorphism::new(f.source.clone(), g.target.clone(), n);
    for k in 1..=n {
        for w in words(f.source.dim(), k) {
            let v = g.apply(&fhat(f, &w));
            out.set_value(&w, v)?;
        }
    }
    Ok(out)
}

/// `t(m(y_1), ..., m(y_k))` for a degree-zero linear map `m` given by columns.
pub(crate) fn precompose_linear(
    t: &BTreeMap<Word, Vector>,
    k: usize,
    m: &LinearMap,
    new_dim: usize,
) -> BTreeMap<Word, Vector> {
    let mut cur = t.clone();
    for slot in 0..k {
        let mut next: BTreeMap<Word, Vector> = BTreeMap::new();
        for (w, v) in &cur {
            for y in 0..new_dim {
                let c = m[y].get(w[slot]);
                if c.is_zero() {
                    continue;
                }
                let mut w2 = w.clone();
                w2[slot] = y;
                next.entry(w2).or_default().add_scaled(v, &c);
            }
        }
        next.retain(|_, v| !v.is_zero());
        cur = next;
    }
    cur
}

/// The structure on the target of `f` making `f` an A∞-morphism, for `f_1` invertible.
pub fn pushforward_algebra(a: &AInftyAlgebra, f: &AInftyMorphism) -> Result<AInftyAlgebra> {
    if a.basis() != f.source() {
        return Err(Error::BasisMismatch(
            "morphism source differs from the algebra".into(),
        ));
    }
    let finv = f
        .linear_inverse()
        .ok_or_else(|| Error::precondition("morphism", "f_1 is not invertible"))?;
    let n = a.max_arity().min(f.max_arity());
    let mut b = AInftyAlgebra::new(f.target.clone(), n);
    for k in 1..=n {
        let mut r: BTreeMap<Word, Vector> = BTreeMap::new();
        for w in words(a.dim(), k) {
            let v = f.apply(&a.bar(&w)).sub(&b.apply(&fhat(f, &w)));
            if !v.is_zero() {
                r.insert(w, v);
            }
        }
        for (w, v) in precompose_linear(&r, k, &finv, b.dim()) {
            b.set_value(&w, v)?;
        }
    }
    Ok(b)
}

/// The structure on the source of `f` making `f` an A∞-morphism into `b`, for `f_1` invertible.
pub fn pullback_algebra(b: &AInftyAlgebra, f: &AInftyMorphism) -> Result<AInftyAlgebra> {
    if b.basis() != f.target() {
        return Err(Error::BasisMismatch(
            "morphism target differs from the algebra".into(),
        ));
    }
    let finv = f
        .linear_inverse()
        .ok_or_else(|| Error::precondition("morphism", "f_1 is not invertible"))?;
    let n = b.max_arity().min(f.max_arity());
    let mut a = AInftyAlgebra::new(f.source.clone(), n);
    for k in 1..=n {
        let mut vals = Vec::new();
        for w in words(a.dim(), k) {
            let r = b.apply(&fhat(f, &w)).sub(&f.apply(&a.bar(&w)));
            let v = apply_linear(&finv, &r);
            if !v.is_zero() {
                vals.push((w, v));
            }
        }
        for (w, v) in vals {
            a.set_value(&w, v)?;
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{from_entries, Convention};
    use crate::graded::int;

    fn exterior() -> AInftyAlgebra {
        let basis = GradedBasis::new([("1", 0), ("t", 1)]).unwrap();
        from_entries(
            basis,
            3,
            Convention::Ns,
            &[
                (vec![0, 0], 0, int(1)),
                (vec![0, 1], 1, int(1)),
                (vec![1, 0], 1, int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_morphism() {
        let a = exterior();
        let id = AInftyMorphism::identity(a.basis(), 3);
        assert!(check_morphism(&a, &a, &id, 3).unwrap().pass());
        assert_eq!(compose_morphisms(&id, &id).unwrap(), id);
    }

    #[test]
    fn non_chain_map_fails_at_arity_one() {
        let basis = GradedBasis::new([("u", 0), ("v", 1)]).unwrap();
        let mut d = AInftyAlgebra::new(basis.clone(), 2);
        d.add_entry(&[0], 1, &int(1)).unwrap();
        let f = AInftyMorphism::linear(
            &basis,
            &basis,
            &vec![Vector::basis(0), Vector::basis(1).scaled(&int(2))],
            2,
        )
        .unwrap();
        let rep = check_morphism(&d, &d, &f, 2).unwrap();
        assert!(!rep.pass());
        assert_eq!(rep.failures[0].arity, 1);
    }

    #[test]
    fn fhat_splits_words() {
        let basis = GradedBasis::new([("a", 1), ("b", 1)]).unwrap();
        let mut f = AInftyMorphism::identity(&basis, 2);
        f.add_entry(&[0, 1], 1, &int(5)).unwrap();
        let s = fhat(&f, &[0, 1]);
        assert_eq!(s.get(&[0, 1]), int(1));
        assert_eq!(s.get(&[1]), int(5));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn pushforward_then_check() {
        let a = exterior();
        let mut f = AInftyMorphism::identity(a.basis(), 3);
        // f_2(t, t) lands in degree |t|'+|t|' = 0, i.e. on t
        f.add_entry(&[1, 1], 1, &int(2)).unwrap();
        f.add_entry(&[0], 0, &int(2)).unwrap();
        let b = pushforward_algebra(&a, &f).unwrap();
        assert!(check_ainfty(&b, 3).pass());
        assert!(check_morphism(&a, &b, &f, 3).unwrap().pass());
        let a2 = pullback_algebra(&b, &f).unwrap();
        assert_eq!(a2, a);
    }
}
