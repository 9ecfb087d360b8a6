//! Cyclic inner products, cyclic morphisms, the strong homotopy inner product
//! conditions and the constructions of cyclic models.

mod conditions;
mod construct;

pub use conditions::{
    bracket, check_closedness, check_homological_nondegeneracy, check_skew_symmetry,
    check_strong_homotopy_inner_product, to_symplectic_form, InnerProductReport, Nondegeneracy,
    SymplecticForm,
};
pub use construct::{
    construct_cyclic_bimodule, construct_cyclic_model, cyclic_gauge_transform,
    pushforward_bimodule, ConstructionLog, CyclicBimoduleModel, CyclicModel,
};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ainfty::{AInftyAlgebra, AInftyMorphism};
use crate::bimodule::{
    check_bimodule_map, compose_bimodule_maps, dual_basis, dual_bimodule_map, dual_of, induced_map,
    Bimodule, BimoduleMap, DualPlacement, ModSum, ModWord,
};
use crate::error::{Error, Result};
use crate::graded::linsolve::{inverse, nullspace};
use crate::graded::tensor::words_of_degree;
use crate::graded::{fmt_scalar, is_odd, sign, GradedBasis, LinearMap, Matrix, Scalar, Vector};
use crate::report::RelationReport;

/// Skew-symmetric bilinear form `g_ij = <e_i, e_j>` of unshifted degree `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairing {
    basis: GradedBasis,
    alpha: i64,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Pairing {
    pub fn new(basis: GradedBasis, alpha: i64) -> Self {
        Self {
            basis,
            alpha,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a pairing from `(i, j, g_ij)`; the skew partner `g_ji` is filled in
    /// and entries given on both sides must agree.
    pub fn from_entries(
        basis: GradedBasis,
        alpha: i64,
        entries: &[(usize, usize, Scalar)],
    ) -> Result<Self> {
        let mut p = Self::new(basis, alpha);
        for (i, j, c) in entries {
            let old = p.get(*i, *j);
            if !old.is_zero() && &old != c {
                return Err(Error::Malformed(format!(
                    "pairing entry <{}, {}> given inconsistently with skew symmetry",
                    p.basis.name(*i),
                    p.basis.name(*j)
                )));
            }
            p.set(*i, *j, c.clone())?;
        }
        Ok(p)
    }

    /// Sets `g_ij = c` and `g_ji = -(-1)^{|e_i|'|e_j|'} c`.
    pub fn set(&mut self, i: usize, j: usize, c: Scalar) -> Result<()> {
        let b = &self.basis;
        if i >= b.dim() || j >= b.dim() {
            return Err(Error::Malformed("pairing index out of range".into()));
        }
        if !c.is_zero() && b.degree(i) + b.degree(j) + self.alpha != 0 {
            return Err(Error::DegreeRule(format!(
                "<{}, {}> nonzero but degrees {} + {} + {} != 0",
                b.name(i),
                b.name(j),
                b.degree(i),
                b.degree(j),
                self.alpha
            )));
        }
        let partner = -sign(is_odd(b.shifted(i) * b.shifted(j))) * &c;
        if i == j && partner != c {
            return Err(Error::Malformed(format!(
                "<{0}, {0}> must vanish by skew symmetry",
                b.name(i)
            )));
        }
        for (key, val) in [((i, j), c), ((j, i), partner)] {
            if val.is_zero() {
                self.entries.remove(&key);
            } else {
                self.entries.insert(key, val);
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn placement(&self) -> DualPlacement {
        DualPlacement::new(self.alpha)
    }

    /// Sum of shifted degrees of paired basis vectors.
    pub fn offset(&self) -> i64 {
        self.placement().offset()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.entries
    }

    pub fn matrix(&self) -> Matrix {
        let n = self.basis.dim();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for ((i, j), c) in &self.entries {
            m[*i][*j] = c.clone();
        }
        m
    }

    pub fn pair(&self, u: &Vector, v: &Vector) -> Scalar {
        let mut s = Scalar::zero();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if let Some(g) = self.entries.get(&(i, j)) {
                    s += a * b * g;
                }
            }
        }
        s
    }

    /// Inverse matrix, or the degeneracy error with a kernel vector.
    pub fn inverse(&self) -> Result<Matrix> {
        let m = self.matrix();
        inverse(&m).ok_or_else(|| {
            let kernel = nullspace(&m, self.basis.dim());
            let v = kernel
                .first()
                .map(|v| Vector::from_dense(v))
                .unwrap_or_default();
            Error::DegeneratePairing {
                witness: render_vector(&self.basis, &v),
            }
        })
    }

    /// The pairing making the linear automorphism `lin` (given by columns) an
    /// isometry onto it: `<lin x, lin y>' = <x, y>`.
    pub fn transported(&self, lin: &LinearMap) -> Result<Self> {
        let m = AInftyMorphism::linear(&self.basis, &self.basis, lin, 1)?;
        let inv = m
            .linear_inverse()
            .ok_or_else(|| Error::precondition("map", "not invertible"))?;
        let mut out = Self::new(self.basis.clone(), self.alpha);
        for i in 0..self.basis.dim() {
            for j in 0..self.basis.dim() {
                let c = self.pair(&inv[i], &inv[j]);
                if !c.is_zero() {
                    out.entries.insert((i, j), c);
                }
            }
        }
        Ok(out)
    }

    /// Pairing read off from `φ_{0,0}(e_i)(e_j)`.
    pub fn from_bimodule_map(phi: &BimoduleMap) -> Result<Self> {
        let offset = map_offset(phi)?;
        let basis = phi.source().clone();
        let alpha = -(offset + 2);
        let mut entries = BTreeMap::new();
        for i in 0..basis.dim() {
            for (j, c) in phi.eval(&ModWord::new(&[], i, &[])).iter() {
                entries.insert((i, j), c.clone());
            }
        }
        let p = Self {
            basis,
            alpha,
            entries,
        };
        for ((i, j), c) in &p.entries {
            let partner = -sign(is_odd(p.basis.shifted(*i) * p.basis.shifted(*j))) * c;
            if p.get(*j, *i) != partner {
                return Err(Error::precondition(
                    "phi",
                    format!(
                        "φ_00 is not skew at ({}, {})",
                        p.basis.name(*i),
                        p.basis.name(*j)
                    ),
                ));
            }
        }
        Ok(p)
    }
}

pub(crate) fn render_vector(basis: &GradedBasis, v: &Vector) -> Vec<String> {
    v.iter()
        .map(|(i, c)| format!("{}*{}", fmt_scalar(c), basis.name(i)))
        .collect()
}

/// Offset `s` of a map into a dual module: `|e_j*|' + |e_j|' = s`.
pub(crate) fn map_offset(phi: &BimoduleMap) -> Result<i64> {
    let (src, tgt) = (phi.source(), phi.target());
    if src.dim() != tgt.dim() {
        return Err(Error::BasisMismatch(
            "map target is not dual to its source".into(),
        ));
    }
    if src.dim() == 0 {
        return Ok(0);
    }
    let offset = tgt.shifted(0) + src.shifted(0);
    if tgt != &dual_basis(src, DualPlacement::new(-(offset + 2))) {
        return Err(Error::BasisMismatch(
            "map target is not dual to its source".into(),
        ));
    }
    Ok(offset)
}

fn require_pairing(a: &AInftyAlgebra, g: &Pairing) -> Result<()> {
    if a.basis() != g.basis() {
        return Err(Error::BasisMismatch(
            "pairing basis differs from the algebra".into(),
        ));
    }
    Ok(())
}

/// Checks `<m_k(x_1..x_k), x_{k+1}> = (-1)^{|x_1|'(|x_2|'+..+|x_{k+1}|')} <m_k(x_2..x_{k+1}), x_1>`
/// for every `k <= n` and every basis tuple.
pub fn check_cyclic(a: &AInftyAlgebra, g: &Pairing, n: usize) -> Result<RelationReport> {
    require_pairing(a, g)?;
    g.inverse()?;
    let degs = a.basis().shifted_degrees();
    let mut rep = RelationReport::new("cyclic symmetry");
    for k in 1..=n.min(a.max_arity()) {
        for t in words_of_degree(&degs, k + 1, g.offset() - 1) {
            let lhs = g.pair(&a.eval(&t[..k]), &Vector::basis(t[k]));
            let rest: i64 = t[1..].iter().map(|i| degs[*i]).sum();
            let rhs =
                sign(is_odd(degs[t[0]] * rest)) * g.pair(&a.eval(&t[1..]), &Vector::basis(t[0]));
            let defect = &lhs - &rhs;
            rep.record(
                k,
                defect.is_zero(),
                || a.basis().render_word(&t),
                || fmt_scalar(&defect),
            );
        }
    }
    Ok(rep)
}

/// `ψ_{0,0}(e_i) = Σ_j g_ij e_j*` over the given algebra basis.
pub(crate) fn psi_map(algebra: &GradedBasis, g: &Pairing, max_arity: usize) -> BimoduleMap {
    let dual = dual_basis(g.basis(), g.placement());
    let mut psi = BimoduleMap::new(algebra.clone(), g.basis().clone(), dual, max_arity);
    for ((i, j), c) in g.entries() {
        psi.add_entry(&ModWord::new(&[], *i, &[]), *j, c)
            .expect("pairing respects degrees");
    }
    psi
}

/// The bimodule map `ψ: A -> A*` with `ψ_{0,0}(a)(b) = <a, b>` and all other components zero.
pub fn pairing_to_bimodule_map(a: &AInftyAlgebra, g: &Pairing) -> Result<BimoduleMap> {
    require_pairing(a, g)?;
    Ok(psi_map(a.basis(), g, a.max_arity().saturating_sub(1)))
}

/// `ψ̂` for a map with only a `(0,0)` component, applied to a sum of module words.
fn hat_sum(psi: &BimoduleMap, s: &ModSum) -> ModSum {
    let mut out = ModSum::new();
    for (w, c) in s.iter() {
        for (u, x) in psi.hat(w).iter() {
            out.add(u.clone(), &(c * x));
        }
    }
    out
}

/// `g* ∘ ψ ∘ g` evaluated on one module word.
pub(crate) fn sandwich_at(
    gstar: &BimoduleMap,
    psi: &BimoduleMap,
    g: &BimoduleMap,
    w: &ModWord,
) -> Vector {
    gstar.apply(&hat_sum(psi, &g.hat(w)))
}

/// `g* ∘ ψ ∘ g: C -> C*` for a bimodule map `g: C -> D` and a pairing on `D`.
pub fn sandwich(g: &BimoduleMap, pairing: &Pairing, n: usize) -> Result<BimoduleMap> {
    if g.target() != pairing.basis() {
        return Err(Error::BasisMismatch(
            "pairing basis differs from the map target".into(),
        ));
    }
    let g = g.truncated(n);
    let psi = psi_map(g.algebra(), pairing, n);
    let gstar = dual_bimodule_map(&g, pairing.placement());
    compose_bimodule_maps(&gstar, &compose_bimodule_maps(&psi, &g)?)
}

/// `f̃* ∘ ψ_B ∘ f̃: A -> A*` for an A∞-morphism `f: A -> B` and a pairing on `B`.
pub fn pullback_inner_product(
    a: &AInftyAlgebra,
    f: &AInftyMorphism,
    g: &Pairing,
    n: usize,
) -> Result<BimoduleMap> {
    sandwich(&induced_map(a, f)?, g, n)
}

/// Kajiura's conditions: `f_1` is an isometry and
/// `Σ_{i+j=k, i,j>0} <f_i(x_1..x_i), f_j(x_{i+1}..x_k)> = 0` for `3 <= k <= n + 1`.
pub fn check_cyclic_morphism(
    a: &AInftyAlgebra,
    b: &AInftyAlgebra,
    f: &AInftyMorphism,
    ga: &Pairing,
    gb: &Pairing,
    n: usize,
) -> Result<RelationReport> {
    require_cyclic_pair(a, b, f, ga, gb, n)?;
    let degs = a.basis().shifted_degrees();
    let mut rep = RelationReport::new("cyclic morphism conditions");
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let defect = gb.pair(&f.eval(&[i]), &f.eval(&[j])) - ga.get(i, j);
            rep.record(
                2,
                defect.is_zero(),
                || a.basis().render_word(&[i, j]),
                || fmt_scalar(&defect),
            );
        }
    }
    for k in 3..=n + 1 {
        for t in words_of_degree(&degs, k, gb.offset()) {
            let mut s = Scalar::zero();
            for i in 1..k {
                let (u, v) = (f.eval(&t[..i]), f.eval(&t[i..]));
                if !u.is_zero() && !v.is_zero() {
                    s += gb.pair(&u, &v);
                }
            }
            rep.record(
                k,
                s.is_zero(),
                || a.basis().render_word(&t),
                || fmt_scalar(&s),
            );
        }
    }
    Ok(rep)
}

/// The commuting square `f̃* ∘ ψ_B ∘ f̃ = ψ_A` of bimodule maps over `A`, up to arity `n`.
pub fn check_cyclic_morphism_diagram(
    a: &AInftyAlgebra,
    b: &AInftyAlgebra,
    f: &AInftyMorphism,
    ga: &Pairing,
    gb: &Pairing,
    n: usize,
) -> Result<RelationReport> {
    require_cyclic_pair(a, b, f, ga, gb, n)?;
    let lhs = pullback_inner_product(a, f, gb, n)?;
    let rhs = psi_map(a.basis(), ga, n);
    Ok(compare_maps("cyclic morphism square", &lhs, &rhs, n))
}

fn require_cyclic_pair(
    a: &AInftyAlgebra,
    b: &AInftyAlgebra,
    f: &AInftyMorphism,
    ga: &Pairing,
    gb: &Pairing,
    n: usize,
) -> Result<()> {
    require_pairing(a, ga)?;
    require_pairing(b, gb)?;
    if f.source() != a.basis() || f.target() != b.basis() {
        return Err(Error::BasisMismatch(
            "morphism bases differ from the given algebras".into(),
        ));
    }
    if ga.offset() != gb.offset() {
        return Err(Error::precondition(
            "pairings",
            "pairings have different degrees",
        ));
    }
    for (side, alg, g) in [("source", a, ga), ("target", b, gb)] {
        let rep = check_cyclic(alg, g, n)?;
        if !rep.pass() {
            let at = rep
                .failures
                .first()
                .map(|x| x.at.clone())
                .unwrap_or_default();
            return Err(Error::precondition(
                side,
                format!("pairing is not cyclic (at {at})"),
            ));
        }
    }
    Ok(())
}

/// Entrywise comparison of two maps on words with `k + l <= n`.
pub fn compare_maps(name: &str, lhs: &BimoduleMap, rhs: &BimoduleMap, n: usize) -> RelationReport {
    let mut rep = RelationReport::new(name);
    let mut keys: BTreeMap<ModWord, ()> = BTreeMap::new();
    for m in [lhs, rhs] {
        for ((k, l), t) in m.comps() {
            if k + l > n {
                continue;
            }
            for (key, _) in t.iter() {
                keys.insert(ModWord::new(&key[..*k], key[*k], &key[k + 1..]), ());
            }
        }
    }
    for w in keys.keys() {
        let defect = lhs.eval(w).sub(&rhs.eval(w));
        let (k, l) = w.shape();
        rep.record(
            k + l,
            defect.is_zero(),
            || w.render(lhs.algebra(), lhs.source()),
            || defect.to_string(),
        );
    }
    rep
}

/// Checks that `ψ_{0,0} = <,>` is a bimodule map `M -> M*`, i.e. that the pairing is cyclic on `M`.
pub fn check_cyclic_bimodule(m: &Bimodule, g: &Pairing, n: usize) -> Result<RelationReport> {
    if m.module() != g.basis() {
        return Err(Error::BasisMismatch(
            "pairing basis differs from the module".into(),
        ));
    }
    g.inverse()?;
    let psi = psi_map(m.algebra().basis(), g, m.max_arity());
    check_bimodule_map(m, &dual_of(m, g.placement()), &psi, n)
}

#[cfg(test)]
mod tests;
