//! Gapped filtered A∞-algebras over the universal Novikov ring: structure
//! checks energy level by energy level, cyclic structures and morphisms, and
//! the potential up to a constant.

mod gapped;
mod novikov;
mod potential;

pub use gapped::{check_gapped, GappedMonoid};
pub use novikov::{Energy, NovikovScalar};
pub use potential::{
    check_filtered_potential_invariance, compute_filtered_potential, pullback_filtered_potential,
    FilteredInvarianceReport, FilteredPoly,
};

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::ainfty::{AInftyAlgebra, AInftyMorphism};
use crate::cyclic::Pairing;
use crate::error::{Error, Result};
use crate::graded::{
    is_odd, sign, words, GradedBasis, Scalar, SparseTensor, Vector, Word, WordSum,
};
use crate::report::RelationReport;

type OpKey = (usize, Energy);

fn degree_error(
    basis: &GradedBasis,
    what: &str,
    k: usize,
    e: &Energy,
    inputs: &[usize],
    out: usize,
) -> Error {
    Error::DegreeRule(format!(
        "{what}_{{{k}, {e}}}({}) -> {} has the wrong degree",
        basis.render_word(inputs),
        basis.name(out)
    ))
}

fn insert(
    comps: &mut BTreeMap<OpKey, SparseTensor>,
    k: usize,
    e: &Energy,
    inputs: &[usize],
    out: usize,
    c: &Scalar,
) {
    let t = comps.entry((k, e.clone())).or_default();
    t.add_term(inputs.to_vec(), out, c);
    if t.is_zero() {
        comps.remove(&(k, e.clone()));
    }
}

/// `m_k = Σ_β T^{λ(β)} e^{μ(β)/2} m_{k,β}` on `C̄ ⊗ Λ_{0,nov}`, kept for `k <= max_arity`
/// and `λ(β) <= cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredAInftyAlgebra {
    basis: GradedBasis,
    ops: BTreeMap<OpKey, SparseTensor>,
    max_arity: usize,
    cap: Scalar,
}

impl FilteredAInftyAlgebra {
    pub fn new(basis: GradedBasis, max_arity: usize, cap: Scalar) -> Self {
        Self {
            basis,
            ops: BTreeMap::new(),
            max_arity,
            cap,
        }
    }

    /// The algebra placed at energy zero.
    pub fn from_unfiltered(a: &AInftyAlgebra, cap: Scalar) -> Self {
        let mut out = Self::new(a.basis().clone(), a.max_arity(), cap);
        for (k, t) in a.ops() {
            out.ops.insert((*k, Energy::zero()), t.clone());
        }
        out
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

    pub fn cap(&self) -> &Scalar {
        &self.cap
    }

    pub fn ops(&self) -> &BTreeMap<(usize, Energy), SparseTensor> {
        &self.ops
    }

    pub fn op(&self, k: usize, e: &Energy) -> Option<&SparseTensor> {
        self.ops.get(&(k, e.clone()))
    }

    /// Adds `c` to the `out` coefficient of `m_{k,β}(inputs)`, with `k = inputs.len()`.
    /// Terms above the cap are dropped.
    pub fn add_entry(
        &mut self,
        e: &Energy,
        inputs: &[usize],
        out: usize,
        c: &Scalar,
    ) -> Result<()> {
        let k = inputs.len();
        if k > self.max_arity {
            return Err(Error::Malformed(format!(
                "arity {k} exceeds the bound {}",
                self.max_arity
            )));
        }
        if e.lambda.is_negative() {
            return Err(Error::Malformed(format!("negative energy {e}")));
        }
        if k == 0 && e.lambda.is_zero() && !c.is_zero() {
            return Err(Error::Malformed("m_0 must have positive energy".into()));
        }
        if self.basis.shifted(out) != 1 + self.basis.word_shifted(inputs) - e.mu() {
            return Err(degree_error(&self.basis, "m", k, e, inputs, out));
        }
        if e.lambda <= self.cap {
            insert(&mut self.ops, k, e, inputs, out, c);
        }
        Ok(())
    }

    pub fn eval(&self, e: &Energy, word: &[usize]) -> Vector {
        self.op(word.len(), e)
            .map(|t| t.eval(word))
            .unwrap_or_default()
    }

    pub fn energies(&self) -> BTreeSet<Energy> {
        self.ops.keys().map(|(_, e)| e.clone()).collect()
    }

    /// The monoid generated by the energies of the operations.
    pub fn monoid(&self) -> GappedMonoid {
        GappedMonoid::new(self.energies())
    }

    /// Operations of energy zero, as an ordinary algebra.
    pub fn energy_zero_slice(&self) -> AInftyAlgebra {
        let mut a = AInftyAlgebra::new(self.basis.clone(), self.max_arity);
        for ((_, e), t) in &self.ops {
            if e.is_zero() {
                for (w, v) in t.iter() {
                    a.set_value(w, v.clone()).expect("energy-zero degrees");
                }
            }
        }
        a
    }

    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.max_arity = n.min(self.max_arity);
        out.ops.retain(|(k, _), _| *k <= n);
        out
    }
}

/// `h_k = Σ_β T^{λ(β)} e^{μ(β)/2} h_{k,β}` including `h_0` of positive energy.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredAInftyMorphism {
    source: GradedBasis,
    target: GradedBasis,
    comps: BTreeMap<OpKey, SparseTensor>,
    max_arity: usize,
    cap: Scalar,
}

impl FilteredAInftyMorphism {
    pub fn new(source: GradedBasis, target: GradedBasis, max_arity: usize, cap: Scalar) -> Self {
        Self {
            source,
            target,
            comps: BTreeMap::new(),
            max_arity,
            cap,
        }
    }

    pub fn identity(basis: &GradedBasis, max_arity: usize, cap: Scalar) -> Self {
        Self::from_unfiltered(&AInftyMorphism::identity(basis, max_arity), cap)
    }

    pub fn from_unfiltered(f: &AInftyMorphism, cap: Scalar) -> Self {
        let mut out = Self::new(f.source().clone(), f.target().clone(), f.max_arity(), cap);
        for (k, t) in f.comps() {
            out.comps.insert((*k, Energy::zero()), t.clone());
        }
        out
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

    pub fn cap(&self) -> &Scalar {
        &self.cap
    }

    pub fn comps(&self) -> &BTreeMap<(usize, Energy), SparseTensor> {
        &self.comps
    }

    pub fn comp(&self, k: usize, e: &Energy) -> Option<&SparseTensor> {
        self.comps.get(&(k, e.clone()))
    }

    pub fn eval(&self, e: &Energy, word: &[usize]) -> Vector {
        self.comp(word.len(), e)
            .map(|t| t.eval(word))
            .unwrap_or_default()
    }

    pub fn add_entry(
        &mut self,
        e: &Energy,
        inputs: &[usize],
        out: usize,
        c: &Scalar,
    ) -> Result<()> {
        let k = inputs.len();
        if k > self.max_arity {
            return Err(Error::Malformed(format!(
                "arity {k} exceeds the bound {}",
                self.max_arity
            )));
        }
        if e.lambda.is_negative() {
            return Err(Error::Malformed(format!("negative energy {e}")));
        }
        if k == 0 && e.lambda.is_zero() && !c.is_zero() {
            return Err(Error::Malformed("h_0 must have positive energy".into()));
        }
        if self.target.shifted(out) != self.source.word_shifted(inputs) - e.mu() {
            return Err(degree_error(&self.source, "h", k, e, inputs, out));
        }
        if e.lambda <= self.cap {
            insert(&mut self.comps, k, e, inputs, out, c);
        }
        Ok(())
    }

    pub fn energies(&self) -> BTreeSet<Energy> {
        self.comps.keys().map(|(_, e)| e.clone()).collect()
    }
}

/// `ĥ` on a word, graded by energy: every splitting into consecutive blocks,
/// with any number of `h_0` insertions, of total energy at most `cap` and at
/// most `max_len` output letters.
pub fn filtered_hat(
    h: &FilteredAInftyMorphism,
    word: &[usize],
    cap: &Scalar,
    max_len: usize,
) -> BTreeMap<Energy, WordSum> {
    let mut out: BTreeMap<Energy, WordSum> = BTreeMap::new();
    let mut stack: Vec<(usize, Energy, Word, Scalar)> =
        vec![(0, Energy::zero(), Vec::new(), Scalar::one())];
    while let Some((start, e, prefix, c)) = stack.pop() {
        if start == word.len() {
            out.entry(e.clone()).or_default().add(prefix.clone(), &c);
        }
        if prefix.len() == max_len {
            continue;
        }
        for ((k, eb), t) in &h.comps {
            if start + k > word.len() {
                continue;
            }
            let e2 = &e + eb;
            if &e2.lambda > cap {
                continue;
            }
            for (o, x) in t.eval(&word[start..start + k]).iter() {
                let mut p = prefix.clone();
                p.push(o);
                stack.push((start + k, e2.clone(), p, &c * x));
            }
        }
    }
    out.retain(|_, s| !s.is_zero());
    out
}

fn effective_cap(a: &Scalar, b: &Scalar) -> Scalar {
    a.clone().min(b.clone())
}

fn require_gapped(energies: BTreeSet<Energy>, cap: &Scalar, side: &str) -> Result<()> {
    let rep = check_gapped(&GappedMonoid::new(energies), cap);
    if !rep.pass() {
        return Err(Error::precondition(
            side,
            format!("energies are not gapped:\n{rep}"),
        ));
    }
    Ok(())
}

/// All sums of two energies from the list, up to the cap.
fn pair_sums(es: &BTreeSet<Energy>, cap: &Scalar) -> BTreeSet<Energy> {
    let mut out = BTreeSet::new();
    for a in es {
        for b in es {
            let s = a + b;
            if &s.lambda <= cap {
                out.insert(s);
            }
        }
    }
    out
}

/// `Σ_{β_1+β_2=β} Σ m_{k_1,β_1}(x.., m_{k_2,β_2}(..), ..x)` at the given energy on one word,
/// including `m_0` insertions.
fn relation_at(a: &FilteredAInftyAlgebra, beta: &Energy, w: &[usize]) -> Vector {
    let k = w.len();
    let mut defect = Vector::new();
    for ((k2, e2), inner_op) in &a.ops {
        if *k2 > k {
            continue;
        }
        let Some(e1) = beta.checked_sub(e2) else {
            continue;
        };
        let k1 = k - k2 + 1;
        let Some(outer) = a.op(k1, &e1) else { continue };
        let mut prefix = 0;
        for i in 0..=k - k2 {
            let inner = inner_op.eval(&w[i..i + k2]);
            let s = sign(is_odd(prefix));
            for (o, c) in inner.iter() {
                let mut w2: Word = w[..i].to_vec();
                w2.push(o);
                w2.extend_from_slice(&w[i + k2..]);
                defect.add_scaled(&outer.eval(&w2), &(&s * c));
            }
            if i < k {
                prefix += a.basis.shifted(w[i]);
            }
        }
    }
    defect
}

/// The A∞-relations energy level by energy level, for every `k <= n` and every
/// `β` with `λ(β) <= cap` that is a sum of two operation energies.
pub fn check_filtered_ainfty(
    a: &FilteredAInftyAlgebra,
    n: usize,
    cap: &Scalar,
) -> Result<RelationReport> {
    let cap = effective_cap(cap, &a.cap);
    require_gapped(a.energies(), &cap, "algebra")?;
    let mut rep = RelationReport::new("filtered A-infinity relations");
    for beta in pair_sums(&a.energies(), &cap) {
        for k in 0..=n {
            for w in words(a.dim(), k) {
                let d = relation_at(a, &beta, &w);
                rep.record(
                    k,
                    d.is_zero(),
                    || format!("{beta} [{}]", a.basis.render_word(&w)),
                    || d.to_string(),
                );
            }
        }
    }
    Ok(rep)
}

/// `h ∘ m̂^A = m^B ∘ ĥ` energy level by energy level, for `h: A → B`.
pub fn check_filtered_morphism(
    a: &FilteredAInftyAlgebra,
    b: &FilteredAInftyAlgebra,
    h: &FilteredAInftyMorphism,
    n: usize,
    cap: &Scalar,
) -> Result<RelationReport> {
    if a.basis() != h.source() || b.basis() != h.target() {
        return Err(Error::BasisMismatch(
            "morphism bases differ from the given algebras".into(),
        ));
    }
    let cap = effective_cap(&effective_cap(cap, &a.cap), &b.cap);
    let mut rep = RelationReport::new("filtered morphism relations");
    for k in 0..=n {
        for w in words(a.dim(), k) {
            let mut lhs: BTreeMap<Energy, Vector> = BTreeMap::new();
            for ((k2, e2), op) in &a.ops {
                if *k2 > k {
                    continue;
                }
                let k1 = k - k2 + 1;
                let mut prefix = 0;
                for i in 0..=k - k2 {
                    let s = sign(is_odd(prefix));
                    for (o, c) in op.eval(&w[i..i + k2]).iter() {
                        let mut w2: Word = w[..i].to_vec();
                        w2.push(o);
                        w2.extend_from_slice(&w[i + k2..]);
                        for ((kk, e1), f) in &h.comps {
                            let e = e1 + e2;
                            if *kk == k1 && e.lambda <= cap {
                                lhs.entry(e)
                                    .or_default()
                                    .add_scaled(&f.eval(&w2), &(&s * c));
                            }
                        }
                    }
                    if i < k {
                        prefix += a.basis.shifted(w[i]);
                    }
                }
            }
            let mut rhs: BTreeMap<Energy, Vector> = BTreeMap::new();
            for (eh, ws) in filtered_hat(h, &w, &cap, b.max_arity) {
                for (u, c) in ws.iter() {
                    for ((r, e0), op) in &b.ops {
                        let e = &eh + e0;
                        if *r == u.len() && e.lambda <= cap {
                            rhs.entry(e).or_default().add_scaled(&op.eval(u), c);
                        }
                    }
                }
            }
            let keys: BTreeSet<Energy> = lhs.keys().chain(rhs.keys()).cloned().collect();
            for e in keys {
                let d = lhs
                    .get(&e)
                    .cloned()
                    .unwrap_or_default()
                    .sub(&rhs.get(&e).cloned().unwrap_or_default());
                rep.record(
                    k,
                    d.is_zero(),
                    || format!("{e} [{}]", a.basis.render_word(&w)),
                    || d.to_string(),
                );
            }
        }
    }
    Ok(rep)
}

/// `<m_{k,β}(x_1..x_k), x_{k+1}> = (-1)^K <m_{k,β}(x_2..x_{k+1}), x_1>` for every
/// `k <= n` and `λ(β) <= cap`; the pairing carries no energy.
pub fn check_filtered_cyclic(
    a: &FilteredAInftyAlgebra,
    g: &Pairing,
    n: usize,
    cap: &Scalar,
) -> Result<RelationReport> {
    if a.basis() != g.basis() {
        return Err(Error::BasisMismatch(
            "pairing basis differs from the algebra".into(),
        ));
    }
    g.inverse()?;
    let rel = check_filtered_ainfty(a, n, cap)?;
    if !rel.pass() {
        return Err(Error::precondition(
            "algebra",
            format!("filtered A-infinity relations fail:\n{rel}"),
        ));
    }
    let cap = effective_cap(cap, &a.cap);
    let b = &a.basis;
    let mut rep = RelationReport::new("filtered cyclic symmetry");
    for ((k, e), t) in &a.ops {
        if *k > n || e.lambda > cap {
            continue;
        }
        for x in words(a.dim(), k + 1) {
            let lhs = g.pair(&t.eval(&x[..*k]), &Vector::basis(x[*k]));
            let rest: i64 = x[1..].iter().map(|i| b.shifted(*i)).sum();
            let rhs = sign(is_odd(b.shifted(x[0]) * rest))
                * g.pair(&t.eval(&x[1..]), &Vector::basis(x[0]));
            let d = &lhs - &rhs;
            rep.record(
                *k,
                d.is_zero(),
                || format!("{e} [{}]", b.render_word(&x)),
                || crate::graded::fmt_scalar(&d),
            );
        }
    }
    Ok(rep)
}

fn require_filtered_cyclic(
    a: &FilteredAInftyAlgebra,
    g: &Pairing,
    n: usize,
    cap: &Scalar,
    side: &str,
) -> Result<()> {
    let rep = check_filtered_cyclic(a, g, n, cap)?;
    if !rep.pass() {
        return Err(Error::precondition(side, format!("not cyclic:\n{rep}")));
    }
    Ok(())
}

/// The two conditions on `h: A → B`: `h_{1,0}` is an isometry, and for every
/// other `(k, β)` the sum `Σ_{i+j=k, β_1+β_2=β} <h_{i,β_1}(x_1..x_i), h_{j,β_2}(x_{i+1}..x_k)>`
/// vanishes. `(k, β) = (2, 0)` is the isometry itself.
pub fn check_filtered_cyclic_morphism(
    a: &FilteredAInftyAlgebra,
    b: &FilteredAInftyAlgebra,
    h: &FilteredAInftyMorphism,
    ga: &Pairing,
    gb: &Pairing,
    n: usize,
    cap: &Scalar,
) -> Result<RelationReport> {
    require_filtered_cyclic(a, ga, n, cap, "source")?;
    require_filtered_cyclic(b, gb, n, cap, "target")?;
    let rel = check_filtered_morphism(a, b, h, n, cap)?;
    if !rel.pass() {
        return Err(Error::precondition(
            "morphism",
            format!("filtered morphism relations fail:\n{rel}"),
        ));
    }
    let cap = effective_cap(&effective_cap(cap, &a.cap), &b.cap);
    let basis = a.basis();
    let mut rep = RelationReport::new("filtered cyclic morphism");
    let zero = Energy::zero();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let d = gb.pair(&h.eval(&zero, &[i]), &h.eval(&zero, &[j])) - ga.get(i, j);
            rep.record(
                2,
                d.is_zero(),
                || format!("isometry at ({}, {})", basis.name(i), basis.name(j)),
                || crate::graded::fmt_scalar(&d),
            );
        }
    }
    for beta in pair_sums(&h.energies(), &cap) {
        for k in 0..=n {
            if k == 2 && beta.is_zero() {
                continue;
            }
            for x in words(a.dim(), k) {
                let mut s = Scalar::zero();
                for ((i, e1), t1) in &h.comps {
                    if *i > k {
                        continue;
                    }
                    let Some(e2) = beta.checked_sub(e1) else {
                        continue;
                    };
                    let Some(t2) = h.comp(k - i, &e2) else {
                        continue;
                    };
                    s += gb.pair(&t1.eval(&x[..*i]), &t2.eval(&x[*i..]));
                }
                rep.record(
                    k,
                    s.is_zero(),
                    || format!("{beta} [{}]", basis.render_word(&x)),
                    || crate::graded::fmt_scalar(&s),
                );
            }
        }
    }
    Ok(rep)
}

/// The deformation of `a` by a positive-energy element `b = Σ T^β b_β` of the
/// right degrees, `m^b_k(x_1..x_k) = Σ m(b..b, x_1, b..b, ..., x_k, b..b)`, up to
/// arity `n`, together with the morphism `id + b` from it to `a`.
pub fn deform(
    a: &FilteredAInftyAlgebra,
    b: &[(Energy, Vector)],
    n: usize,
) -> Result<(FilteredAInftyAlgebra, FilteredAInftyMorphism)> {
    let mut h = FilteredAInftyMorphism::identity(a.basis(), n, a.cap.clone());
    for (e, v) in b {
        if e.lambda <= Scalar::zero() {
            return Err(Error::Malformed(
                "deformation element needs positive energy".into(),
            ));
        }
        for (o, c) in v.iter() {
            h.add_entry(e, &[], o, c)?;
        }
    }
    let mut out = FilteredAInftyAlgebra::new(a.basis().clone(), n, a.cap.clone());
    // substituting h_0 only lengthens a word
    let top = a
        .ops
        .iter()
        .filter(|(_, op)| op.iter().next().is_some())
        .map(|((r, _), _)| *r)
        .max()
        .unwrap_or(0);
    for k in 0..=n.min(top) {
        for w in words(a.dim(), k) {
            for (eh, ws) in filtered_hat(&h, &w, &a.cap, a.max_arity) {
                for (u, c) in ws.iter() {
                    for ((r, e0), op) in &a.ops {
                        let e = &eh + e0;
                        if *r != u.len() || e.lambda > a.cap {
                            continue;
                        }
                        for (o, x) in op.eval(u).iter() {
                            out.add_entry(&e, &w, o, &(c * x))?;
                        }
                    }
                }
            }
        }
    }
    Ok((out, h))
}
