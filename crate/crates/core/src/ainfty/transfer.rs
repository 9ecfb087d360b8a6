//! Homotopy transfer onto cohomology.

use super::morphism::fhat;
use super::{check_ainfty, AInftyAlgebra, AInftyMorphism};
use crate::error::{Error, Result};
use crate::graded::homology::{apply as apply_linear, chain_homology, Contraction, LinearMap};
use crate::graded::{is_odd, words, Scalar, Vector, WordSum};

#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub contraction: Contraction,
    pub homology: AInftyAlgebra,
    /// `H -> A`
    pub incl: AInftyMorphism,
    /// `A -> H`
    pub proj: AInftyMorphism,
}

fn m1_columns(a: &AInftyAlgebra) -> LinearMap {
    (0..a.dim()).map(|j| a.eval(&[j])).collect()
}

/// Tensor-trick homotopy on `A^{⊗k}`: `Σ_j ± 1^{⊗j} ⊗ h ⊗ (ip)^{⊗(k-j-1)}`.
fn tensor_homotopy(a: &AInftyAlgebra, c: &Contraction, ip: &LinearMap, w: &[usize]) -> WordSum {
    let mut out = WordSum::new();
    let mut prefix = 0i64;
    for j in 0..w.len() {
        let mut acc = WordSum::single(w[..j].to_vec(), crate::graded::sign(is_odd(prefix)));
        let mut parts = vec![c.homotopy[w[j]].clone()];
        parts.extend(w[j + 1..].iter().map(|x| ip[*x].clone()));
        for v in parts {
            let mut next = WordSum::new();
            for (u, x) in acc.iter() {
                for (o, y) in v.iter() {
                    let mut u2 = u.clone();
                    u2.push(o);
                    next.add(u2, &(x * y));
                }
            }
            acc = next;
        }
        out.add_scaled(&acc, &Scalar::from_integer(1.into()));
        prefix += a.basis().shifted(w[j]);
    }
    out
}

/// Transfers the A∞-structure of `a` to its cohomology, up to arity `n`.
pub fn minimal_model(a: &AInftyAlgebra, n: usize) -> Result<MinimalModel> {
    let rep = check_ainfty(a, n);
    if !rep.pass() {
        return Err(Error::precondition("algebra", "A-infinity relation fails"));
    }
    let a = a.truncated(n);
    let c = chain_homology(a.basis(), &m1_columns(&a))?;
    let hb = c.homology.clone();
    let mut h = AInftyAlgebra::new(hb.clone(), n);
    let mut incl = AInftyMorphism::linear(&hb, a.basis(), &c.incl, n)?;
    let mut proj = AInftyMorphism::linear(a.basis(), &hb, &c.proj, n)?;

    for k in 2..=n {
        let mut new_m = Vec::new();
        let mut new_i = Vec::new();
        for w in words(hb.dim(), k) {
            let r = a.apply(&fhat(&incl, &w)).sub(&incl.apply(&h.bar(&w)));
            if r.is_zero() {
                continue;
            }
            let m1r = apply_linear(&m1_columns(&a), &r);
            if !m1r.is_zero() {
                return Err(Error::NotADifferential(format!(
                    "transfer obstruction at arity {k} is not a cycle"
                )));
            }
            new_m.push((w.clone(), apply_linear(&c.proj, &r)));
            new_i.push((
                w,
                apply_linear(&c.homotopy, &r).scaled(&-Scalar::from_integer(1.into())),
            ));
        }
        for (w, v) in new_m {
            h.set_value(&w, v)?;
        }
        for (w, v) in new_i {
            incl.set_value(&w, v)?;
        }
    }

    let ip: LinearMap = (0..a.dim())
        .map(|j| apply_linear(&c.incl, &c.proj[j]))
        .collect();
    for k in 2..=n {
        let mut s = std::collections::BTreeMap::new();
        for w in words(a.dim(), k) {
            let v = h.apply(&fhat(&proj, &w)).sub(&proj.apply(&a.bar(&w)));
            if !v.is_zero() {
                s.insert(w, v);
            }
        }
        let mut vals = Vec::new();
        for w in words(a.dim(), k) {
            let mut v = Vector::new();
            for (u, x) in tensor_homotopy(&a, &c, &ip, &w).iter() {
                if let Some(y) = s.get(u) {
                    v.add_scaled(y, x);
                }
            }
            if !v.is_zero() {
                vals.push((w, v));
            }
        }
        for (w, v) in vals {
            proj.set_value(&w, v)?;
        }
    }
    Ok(MinimalModel {
        contraction: c,
        homology: h,
        incl,
        proj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{check_morphism, compose_morphisms, from_entries, Convention};
    use crate::graded::{int, GradedBasis};

    #[test]
    fn minimal_algebra_is_its_own_model() {
        let basis = GradedBasis::new([("1", 0), ("t", 1)]).unwrap();
        let a = from_entries(
            basis,
            3,
            Convention::Ns,
            &[
                (vec![0, 0], 0, int(1)),
                (vec![0, 1], 1, int(1)),
                (vec![1, 0], 1, int(1)),
            ],
        )
        .unwrap();
        let mm = minimal_model(&a, 3).unwrap();
        assert_eq!(mm.homology.dim(), 2);
        assert!(mm.homology.op(1).is_none());
        assert!(check_morphism(&mm.homology, &a, &mm.incl, 3)
            .unwrap()
            .pass());
        assert!(check_morphism(&a, &mm.homology, &mm.proj, 3)
            .unwrap()
            .pass());
    }

    #[test]
    fn acyclic_complex_has_zero_model() {
        let basis = GradedBasis::new([("u", 0), ("v", 1)]).unwrap();
        let mut a = AInftyAlgebra::new(basis, 3);
        a.add_entry(&[0], 1, &int(1)).unwrap();
        let mm = minimal_model(&a, 3).unwrap();
        assert_eq!(mm.homology.dim(), 0);
    }

    #[test]
    fn transferred_product_matches_cohomology_product() {
        // 1 (deg 0), x, y (deg 1), z (deg 2): d x = z, unit 1, y y = z
        let basis = GradedBasis::new([("1", 0), ("x", 1), ("y", 1), ("z", 2)]).unwrap();
        let mut entries = vec![(vec![1], 3, int(1))];
        for i in 0..4 {
            entries.push((vec![0, i], i, int(1)));
            if i != 0 {
                entries.push((vec![i, 0], i, int(1)));
            }
        }
        entries.push((vec![2, 2], 3, int(1)));
        let a = from_entries(basis, 4, Convention::Ns, &entries).unwrap();
        assert!(check_ainfty(&a, 4).pass());
        let mm = minimal_model(&a, 4).unwrap();
        // H is spanned by [1] and [y]; [y]·[y] = [z] = 0 in cohomology.
        assert_eq!(mm.homology.dim(), 2);
        assert!(check_ainfty(&mm.homology, 4).pass());
        assert!(check_morphism(&mm.homology, &a, &mm.incl, 4)
            .unwrap()
            .pass());
        assert!(check_morphism(&a, &mm.homology, &mm.proj, 4)
            .unwrap()
            .pass());
        let pi = compose_morphisms(&mm.proj, &mm.incl).unwrap();
        for j in 0..2 {
            assert_eq!(pi.eval(&[j]), Vector::basis(j));
        }
        // induced product on representatives: p(m2(i a, i b))
        for u in 0..2 {
            for v in 0..2 {
                let prod = a.apply(&crate::ainfty::morphism::tensor_vectors(&[
                    mm.incl.eval(&[u]),
                    mm.incl.eval(&[v]),
                ]));
                assert_eq!(
                    mm.homology.eval(&[u, v]),
                    apply_linear(&mm.contraction.proj, &prod)
                );
            }
        }
    }
}
