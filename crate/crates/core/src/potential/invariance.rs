use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{
    nc_derivative, strict_projection, CyclicMode, Metric, NCPoly, TaggedNCPoly, Variables,
};
use crate::ainfty::{AInftyAlgebra, AInftyMorphism};
use crate::cyclic::{check_cyclic, check_cyclic_morphism, Pairing};
use crate::error::{Error, Result};
use crate::graded::{ratio, Scalar, Word};
use crate::report::RelationReport;

fn require_cyclic(a: &AInftyAlgebra, g: &Pairing, n: usize, side: &str) -> Result<()> {
    let rep = check_cyclic(a, g, n)?;
    if !rep.pass() {
        let at = rep
            .failures
            .first()
            .map(|f| format!("arity {} at {}", f.arity, f.at))
            .unwrap_or_default();
        return Err(Error::precondition(
            side,
            format!("pairing is not cyclic ({at})"),
        ));
    }
    Ok(())
}

/// `Φ = Σ_{k<=N} 1/(k+1) m^j_{i_1..i_k} g_{j,i_{k+1}} x_{i_1}…x_{i_{k+1}}`.
pub fn compute_potential(a: &AInftyAlgebra, g: &Pairing, n: usize) -> Result<NCPoly> {
    if a.basis() != g.basis() {
        return Err(Error::BasisMismatch(
            "pairing is not on the algebra's basis".into(),
        ));
    }
    require_cyclic(a, g, n, "algebra")?;
    let vars = Variables::dual_to(a.basis(), "x");
    let mut phi = NCPoly::zero(vars.clone());
    for (k, t) in a.ops().range(1..=n) {
        let w = ratio(1, *k as i64 + 1);
        for (inputs, out) in t.iter() {
            for (j, m) in out.iter() {
                for ((j2, i), gji) in g.entries().range((j, 0)..(j + 1, 0)) {
                    debug_assert_eq!(*j2, j);
                    let mut word = inputs.clone();
                    word.push(*i);
                    phi.add(&word, &(m * gji * &w));
                }
            }
        }
    }
    for (word, _) in phi.terms() {
        debug_assert_eq!(g.basis().word_shifted(word), g.offset() - 1);
    }
    Ok(phi)
}

/// Substitutes `x_i ↦ Σ h^i_{j_1..j_k} y_{j_1}…y_{j_k}` for `h: B → A` and
/// keeps words of length at most `N + 1`.
pub fn pullback_potential(h: &AInftyMorphism, phi: &NCPoly, n: usize) -> Result<NCPoly> {
    if phi.vars().len() != h.target().dim() {
        return Err(Error::BasisMismatch(
            "polynomial variables do not match the morphism target".into(),
        ));
    }
    let ys = Variables::dual_to(h.source(), "y");
    let max = n + 1;
    // images of each x_i as word sums in the y variables
    let mut images: Vec<Vec<(Word, Scalar)>> = vec![Vec::new(); h.target().dim()];
    for (_, t) in h.comps().range(1..=max) {
        for (inputs, out) in t.iter() {
            for (i, c) in out.iter() {
                images[i].push((inputs.clone(), c.clone()));
            }
        }
    }
    let mut out = NCPoly::zero(ys);
    for (w, c) in phi.terms() {
        if w.len() > max {
            continue;
        }
        let mut acc: BTreeMap<Word, Scalar> = BTreeMap::from([(Vec::new(), c.clone())]);
        for (pos, x) in w.iter().enumerate() {
            // each remaining letter contributes at least one y
            let room = max - (w.len() - pos - 1);
            let mut next: BTreeMap<Word, Scalar> = BTreeMap::new();
            for (u, a) in &acc {
                for (v, b) in &images[*x] {
                    if u.len() + v.len() > room {
                        continue;
                    }
                    let mut uv = u.clone();
                    uv.extend_from_slice(v);
                    *next.entry(uv).or_insert_with(Scalar::zero) += a * b;
                }
            }
            next.retain(|_, s| !s.is_zero());
            acc = next;
        }
        for (u, a) in acc {
            out.add(&u, &a);
        }
    }
    Ok(out)
}

/// `Σ_k m^j_{i_1..i_k} x_{i_1}…x_{i_k} t_j`, the tagged derivative of the
/// potential read directly off the structure constants.
pub fn tagged_closed_form(
    a: &AInftyAlgebra,
    g: &Pairing,
    vars: &Variables,
    n: usize,
) -> Result<TaggedNCPoly> {
    let metric = Metric::from_pairing(g)?;
    let mut out = TaggedNCPoly::zero(vars.clone(), metric.tag_degrees(vars));
    for (_, t) in a.ops().range(1..=n) {
        for (inputs, v) in t.iter() {
            for (j, m) in v.iter() {
                out.add(inputs, j, m);
            }
        }
    }
    Ok(out)
}

/// Both routes of the invariance identity for a cyclic morphism `h: B → A`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    /// `Φ^B = (h^*Φ^A)_c` coefficientwise.
    pub potential: RelationReport,
    /// The tagged derivatives of both sides, the left one from the closed form.
    pub tagged: RelationReport,
    pub lhs: NCPoly,
    pub rhs: NCPoly,
    /// Orbits of the pullback that rotate onto themselves with sign `-1`; the
    /// rotation average removes them and the tagged derivative kills them.
    pub obstructed: NCPoly,
}

impl InvarianceReport {
    pub fn pass(&self) -> bool {
        self.potential.pass() && self.tagged.pass()
    }

    pub fn difference(&self) -> NCPoly {
        self.lhs.sub(&self.rhs)
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.potential, self.tagged)?;
        writeln!(f, "difference = {}", self.difference())
    }
}

pub fn check_potential_invariance(
    a: &AInftyAlgebra,
    b: &AInftyAlgebra,
    h: &AInftyMorphism,
    ga: &Pairing,
    gb: &Pairing,
    n: usize,
) -> Result<InvarianceReport> {
    require_cyclic(a, ga, n, "target")?;
    require_cyclic(b, gb, n, "source")?;
    let rep = check_cyclic_morphism(b, a, h, gb, ga, n)?;
    if !rep.pass() {
        return Err(Error::precondition(
            "morphism",
            format!("not a cyclic morphism:\n{rep}"),
        ));
    }
    let len = n + 1;
    let phi_a = compute_potential(a, ga, n)?;
    let pulled = pullback_potential(h, &phi_a, n)?;
    let phi_b = compute_potential(b, gb, n)?
        .truncated(len)
        .renamed(pulled.vars().clone());
    let mut potential = RelationReport::new("potential invariance");
    let mut tagged = RelationReport::new("tagged derivative identity");
    let (rhs, obstructed) = strict_projection(&pulled);
    potential.merge(phi_b.compare(&rhs, "potential invariance"));
    let metric = Metric::from_pairing(gb)?;
    let left = tagged_closed_form(b, gb, phi_b.vars(), n)?.truncated(n);
    let right = nc_derivative(&rhs, &metric, CyclicMode::Strict)?;
    tagged.merge(left.compare(&right, "tagged derivative identity"));
    Ok(InvarianceReport {
        potential,
        tagged,
        lhs: phi_b,
        rhs,
        obstructed,
    })
}
