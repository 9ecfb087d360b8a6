use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{check_bimodule, dual_basis, mod_words, Bimodule, DualPlacement, ModSum, ModWord};
use crate::ainfty::{AInftyAlgebra, AInftyMorphism};
use crate::error::{Error, Result};
use crate::graded::{is_odd, GradedBasis, Scalar, SparseTensor, Vector};
use crate::report::RelationReport;

/// Bimodule map components `φ_{k,l}`, each of shifted degree zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BimoduleMap {
    algebra: GradedBasis,
    source: GradedBasis,
    target: GradedBasis,
    comps: BTreeMap<(usize, usize), SparseTensor>,
    max_arity: usize,
}

impl BimoduleMap {
    pub fn new(
        algebra: GradedBasis,
        source: GradedBasis,
        target: GradedBasis,
        max_arity: usize,
    ) -> Self {
        Self {
            algebra,
            source,
            target,
            comps: BTreeMap::new(),
            max_arity,
        }
    }

    pub fn identity(m: &Bimodule) -> Self {
        let mut f = Self::new(
            m.algebra().basis().clone(),
            m.module().clone(),
            m.module().clone(),
            m.max_arity(),
        );
        for i in 0..m.module().dim() {
            f.add_entry(&ModWord::new(&[], i, &[]), i, &Scalar::one())
                .expect("identity respects degrees");
        }
        f
    }

    pub fn algebra(&self) -> &GradedBasis {
        &self.algebra
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

    pub fn comps(&self) -> &BTreeMap<(usize, usize), SparseTensor> {
        &self.comps
    }

    pub fn eval(&self, w: &ModWord) -> Vector {
        self.comps
            .get(&w.shape())
            .map(|t| t.eval(&w.key()))
            .unwrap_or_default()
    }

    pub fn apply(&self, s: &ModSum) -> Vector {
        let mut out = Vector::new();
        for (w, c) in s.iter() {
            if let Some(v) = self.comps.get(&w.shape()).and_then(|t| t.get(&w.key())) {
                out.add_scaled(v, c);
            }
        }
        out
    }

    fn check_entry(&self, w: &ModWord, output: usize) -> Result<()> {
        let (k, l) = w.shape();
        if k + l > self.max_arity {
            return Err(Error::Malformed(format!(
                "component ({k},{l}) exceeds max_arity {}",
                self.max_arity
            )));
        }
        if output >= self.target.dim()
            || w.v >= self.source.dim()
            || w.left
                .iter()
                .chain(&w.right)
                .any(|i| *i >= self.algebra.dim())
        {
            return Err(Error::Malformed("basis index out of range".into()));
        }
        let want = self.algebra.word_shifted(&w.left)
            + self.source.shifted(w.v)
            + self.algebra.word_shifted(&w.right);
        if self.target.shifted(output) != want {
            return Err(Error::DegreeRule(format!(
                "φ_{{{k},{l}}}({}) -> {}: shifted output degree must be {want}",
                w.render(&self.algebra, &self.source),
                self.target.name(output)
            )));
        }
        Ok(())
    }

    pub fn add_entry(&mut self, w: &ModWord, output: usize, c: &Scalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        self.check_entry(w, output)?;
        let t = self.comps.entry(w.shape()).or_default();
        t.add_term(w.key(), output, c);
        if t.is_zero() {
            self.comps.remove(&w.shape());
        }
        Ok(())
    }

    pub fn set_value(&mut self, w: &ModWord, v: Vector) -> Result<()> {
        for (o, _) in v.iter() {
            self.check_entry(w, o)?;
        }
        let t = self.comps.entry(w.shape()).or_default();
        t.set(w.key(), v);
        if t.is_zero() {
            self.comps.remove(&w.shape());
        }
        Ok(())
    }

    /// `φ̂`: `φ` applied to every block straddling the module slot. Unsigned, as `φ` has degree zero.
    pub fn hat(&self, w: &ModWord) -> ModSum {
        let (k, l) = w.shape();
        let mut out = ModSum::new();
        for i in 0..=k {
            for j in 0..=l {
                let Some(t) = self.comps.get(&(k - i, j)) else {
                    continue;
                };
                let inner = ModWord::new(&w.left[i..], w.v, &w.right[..j]);
                if let Some(v) = t.get(&inner.key()) {
                    for (o, x) in v.iter() {
                        out.add(ModWord::new(&w.left[..i], o, &w.right[j..]), x);
                    }
                }
            }
        }
        out
    }

    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.max_arity = n.min(self.max_arity);
        out.comps.retain(|(k, l), _| k + l <= n);
        out
    }
}

fn require_modules(c: &Bimodule, d: &Bimodule, f: &BimoduleMap) -> Result<()> {
    if c.algebra() != d.algebra() {
        return Err(Error::BasisMismatch(
            "bimodules are over different algebras".into(),
        ));
    }
    if f.algebra() != c.algebra().basis() || f.source() != c.module() || f.target() != d.module() {
        return Err(Error::BasisMismatch(
            "map bases differ from the given bimodules".into(),
        ));
    }
    Ok(())
}

fn require_bimodule(m: &Bimodule, n: usize, side: &str) -> Result<()> {
    let rep = check_bimodule(m, n)?;
    if rep.pass() {
        Ok(())
    } else {
        let at = rep
            .failures
            .first()
            .map(|x| x.at.clone())
            .unwrap_or_default();
        Err(Error::precondition(
            side,
            format!("bimodule relation fails at {at}"),
        ))
    }
}

/// Checks `φ ∘ b̂_C = b_D ∘ φ̂` on every module word with `k + l <= n`.
pub fn check_bimodule_map(
    c: &Bimodule,
    d: &Bimodule,
    f: &BimoduleMap,
    n: usize,
) -> Result<RelationReport> {
    require_modules(c, d, f)?;
    require_bimodule(c, n, "source")?;
    require_bimodule(d, n, "target")?;
    Ok(bimodule_map_defects(c, d, f, n))
}

pub(crate) fn bimodule_map_defects(
    c: &Bimodule,
    d: &Bimodule,
    f: &BimoduleMap,
    n: usize,
) -> RelationReport {
    let mut rep = RelationReport::new("bimodule map relations");
    for w in mod_words(c.algebra().dim(), c.module().dim(), n) {
        let defect = f.apply(&c.bar(&w)).sub(&d.apply(&f.hat(&w)));
        let (k, l) = w.shape();
        rep.record(
            k + l,
            defect.is_zero(),
            || w.render(c.algebra().basis(), c.module()),
            || defect.to_string(),
        );
    }
    rep
}

/// `(g ∘ f)_{k,l} = Σ g_{i, l-j}(a_1..a_i, f_{k-i,j}(..), b_{j+1}..b_l)`.
pub fn compose_bimodule_maps(g: &BimoduleMap, f: &BimoduleMap) -> Result<BimoduleMap> {
    if f.target() != g.source() || f.algebra() != g.algebra() {
        return Err(Error::BasisMismatch("maps do not compose".into()));
    }
    let n = f.max_arity.min(g.max_arity);
    let mut out = BimoduleMap::new(f.algebra.clone(), f.source.clone(), g.target.clone(), n);
    for w in mod_words(f.algebra.dim(), f.source.dim(), n) {
        let v = g.apply(&f.hat(&w));
        out.set_value(&w, v)?;
    }
    Ok(out)
}

/// `f*_{k,l}(x, v, y)(w) = (-1)^K v(f_{l,k}(y, w, x))`, `K = (Σ|x|')(|v|' + Σ|y|' + |w|')`.
/// Both duals use the same placement.
pub fn dual_bimodule_map(f: &BimoduleMap, placement: DualPlacement) -> BimoduleMap {
    let src_dual = dual_basis(&f.target, placement);
    let tgt_dual = dual_basis(&f.source, placement);
    let mut out = BimoduleMap::new(
        f.algebra.clone(),
        src_dual.clone(),
        tgt_dual.clone(),
        f.max_arity,
    );
    for ((l, _), t) in &f.comps {
        for (key, v) in t.iter() {
            let y = &key[..*l];
            let wi = key[*l];
            let x = &key[l + 1..];
            let sx = f.algebra.word_shifted(x);
            let sy = f.algebra.word_shifted(y);
            for (d, coeff) in v.iter() {
                let e = sx * (src_dual.shifted(d) + sy + f.source.shifted(wi));
                let c = if is_odd(e) {
                    -coeff.clone()
                } else {
                    coeff.clone()
                };
                out.add_entry(&ModWord::new(x, d, y), wi, &c)
                    .expect("dual map respects degrees");
            }
        }
    }
    out
}

/// `f̃_{k,l} = f_{k+l+1}` from the diagonal bimodule of `A` to `B` over `A`.
pub fn induced_map(a: &AInftyAlgebra, f: &AInftyMorphism) -> Result<BimoduleMap> {
    let n = f.max_arity().saturating_sub(1);
    let mut out = BimoduleMap::new(a.basis().clone(), f.source().clone(), f.target().clone(), n);
    for (arity, t) in f.comps() {
        if *arity > n + 1 {
            continue;
        }
        for (w, v) in t.iter() {
            for k in 0..*arity {
                out.set_value(&ModWord::new(&w[..k], w[k], &w[k + 1..]), v.clone())?;
            }
        }
    }
    Ok(out)
}
