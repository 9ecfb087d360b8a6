use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::{
    check_filtered_cyclic, check_filtered_cyclic_morphism, Energy, FilteredAInftyAlgebra,
    FilteredAInftyMorphism, NovikovScalar,
};
use crate::cyclic::Pairing;
use crate::error::{Error, Result};
use crate::graded::{ratio, Scalar, Word};
use crate::potential::{
    nc_derivative, strict_projection, CyclicMode, Metric, NCPoly, TaggedNCPoly, Variables,
};
use crate::report::RelationReport;

/// `Σ_β T^{λ(β)} e^{μ(β)/2} P_β` with each `P_β` a polynomial in the same variables.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredPoly {
    vars: Variables,
    comps: BTreeMap<Energy, NCPoly>,
}

impl FilteredPoly {
    pub fn zero(vars: Variables) -> Self {
        Self {
            vars,
            comps: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn add(&mut self, e: &Energy, w: &[usize], c: &Scalar) {
        let p = self
            .comps
            .entry(e.clone())
            .or_insert_with(|| NCPoly::zero(self.vars.clone()));
        p.add(w, c);
        if p.is_zero() {
            self.comps.remove(e);
        }
    }

    pub fn component(&self, e: &Energy) -> NCPoly {
        self.comps
            .get(e)
            .cloned()
            .unwrap_or_else(|| NCPoly::zero(self.vars.clone()))
    }

    pub fn components(&self) -> impl Iterator<Item = (&Energy, &NCPoly)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn renamed(mut self, vars: Variables) -> Self {
        self.comps = self
            .comps
            .into_iter()
            .map(|(e, p)| (e, p.renamed(vars.clone())))
            .collect();
        self.vars = vars;
        self
    }

    pub fn truncated(&self, len: usize) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, p) in &self.comps {
            for (w, c) in p.truncated(len).terms() {
                out.add(e, w, c);
            }
        }
        out
    }

    /// The coefficient of the empty word, energy by energy.
    pub fn constant(&self, cap: Scalar) -> NovikovScalar {
        let mut s = NovikovScalar::zero(cap);
        for (e, p) in &self.comps {
            s.add_term(e.clone(), &p.constant());
        }
        s
    }

    /// The same series with its constant terms removed.
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        for p in out.comps.values_mut() {
            let c = p.constant();
            p.add(&[], &-c);
        }
        out.comps.retain(|_, p| !p.is_zero());
        out
    }
}

impl fmt::Display for FilteredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(e, p)| format!("{e} ({p})"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Φ = Σ_{k<=N} Σ_β T^{λ(β)} e^{μ(β)/2} 1/(k+1) <m_{k,β}(x_1..x_k), x_{k+1}>`, the `k = 0`
/// term included.
pub fn compute_filtered_potential(
    a: &FilteredAInftyAlgebra,
    g: &Pairing,
    n: usize,
    cap: &Scalar,
) -> Result<FilteredPoly> {
    let rep = check_filtered_cyclic(a, g, n, cap)?;
    if !rep.pass() {
        return Err(Error::precondition(
            "algebra",
            format!("not cyclic:\n{rep}"),
        ));
    }
    let mut phi = FilteredPoly::zero(Variables::dual_to(a.basis(), "x"));
    for ((k, e), t) in a.ops() {
        if *k > n || &e.lambda > cap {
            continue;
        }
        let w = ratio(1, *k as i64 + 1);
        for (inputs, out) in t.iter() {
            for (j, m) in out.iter() {
                for ((_, i), gji) in g.entries().range((j, 0)..(j + 1, 0)) {
                    let mut word = inputs.clone();
                    word.push(*i);
                    phi.add(e, &word, &(m * gji * &w));
                }
            }
        }
    }
    Ok(phi)
}

/// Substitutes `x_i ↦ Σ_β T^{λ(β)} e^{μ(β)/2} h^i_{β; j_1..j_k} y_{j_1}…y_{j_k}` for
/// `h: B → A`, `h_0` included, keeping words of length at most `N + 1` and
/// energies up to the cap.
pub fn pullback_filtered_potential(
    h: &FilteredAInftyMorphism,
    phi: &FilteredPoly,
    n: usize,
    cap: &Scalar,
) -> Result<FilteredPoly> {
    if phi.vars().len() != h.target().dim() {
        return Err(Error::BasisMismatch(
            "polynomial variables do not match the morphism target".into(),
        ));
    }
    let max = n + 1;
    let mut images: Vec<Vec<(Word, Energy, Scalar)>> = vec![Vec::new(); h.target().dim()];
    for ((k, e), t) in h.comps() {
        if *k > max {
            continue;
        }
        for (inputs, out) in t.iter() {
            for (i, c) in out.iter() {
                images[i].push((inputs.clone(), e.clone(), c.clone()));
            }
        }
    }
    let mut out = FilteredPoly::zero(Variables::dual_to(h.source(), "y"));
    for (e0, p) in phi.components() {
        for (w, c) in p.terms() {
            let mut acc: BTreeMap<(Word, Energy), Scalar> =
                BTreeMap::from([((Vec::new(), e0.clone()), c.clone())]);
            for x in w {
                let mut next: BTreeMap<(Word, Energy), Scalar> = BTreeMap::new();
                for ((u, eu), a) in &acc {
                    for (v, ev, b) in &images[*x] {
                        let e = eu + ev;
                        if u.len() + v.len() > max || &e.lambda > cap {
                            continue;
                        }
                        let mut uv = u.clone();
                        uv.extend_from_slice(v);
                        *next.entry((uv, e)).or_insert_with(Scalar::zero) += a * b;
                    }
                }
                next.retain(|_, s| !s.is_zero());
                acc = next;
            }
            for ((u, e), a) in acc {
                out.add(&e, &u, &a);
            }
        }
    }
    Ok(out)
}

/// Both routes of the filtered invariance identity for `h: B → A`. Words of
/// length at least one must agree; the constant is reported.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredInvarianceReport {
    pub potential: RelationReport,
    pub tagged: RelationReport,
    pub lhs: FilteredPoly,
    pub rhs: FilteredPoly,
    pub obstructed: FilteredPoly,
    /// `Φ^B - (h^*Φ^A)_c` on the empty word.
    pub constant: NovikovScalar,
}

impl FilteredInvarianceReport {
    pub fn pass(&self) -> bool {
        self.potential.pass() && self.tagged.pass()
    }
}

impl fmt::Display for FilteredInvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.potential, self.tagged)?;
        writeln!(f, "constant = {}", self.constant)
    }
}

fn at_energy(mut rep: RelationReport, e: &Energy) -> RelationReport {
    for f in &mut rep.failures {
        f.at = format!("{e} [{}]", f.at);
    }
    rep
}

/// Arity up to which `Φ^A` must be known: each `h_0` substitution removes a
/// letter, at a cost of at least the smallest `h_0` energy.
fn source_arity_needed(h: &FilteredAInftyMorphism, n: usize, cap: &Scalar) -> usize {
    let min = h
        .comps()
        .keys()
        .filter(|(k, _)| *k == 0)
        .map(|(_, e)| e.lambda.clone())
        .min();
    match min {
        Some(m) => {
            n + (cap / m)
                .floor()
                .to_integer()
                .try_into()
                .unwrap_or(usize::MAX / 2)
        }
        None => n,
    }
}

pub fn check_filtered_potential_invariance(
    a: &FilteredAInftyAlgebra,
    b: &FilteredAInftyAlgebra,
    h: &FilteredAInftyMorphism,
    ga: &Pairing,
    gb: &Pairing,
    n: usize,
    cap: &Scalar,
) -> Result<FilteredInvarianceReport> {
    let rep = check_filtered_cyclic_morphism(b, a, h, gb, ga, n, cap)?;
    if !rep.pass() {
        return Err(Error::precondition(
            "morphism",
            format!("not a cyclic filtered morphism:\n{rep}"),
        ));
    }
    let na = source_arity_needed(h, n, cap);
    if a.max_arity() < na {
        return Err(Error::precondition(
            "target",
            format!(
                "known up to arity {}, the substitution reaches arity {na}",
                a.max_arity()
            ),
        ));
    }
    let phi_a = compute_filtered_potential(a, ga, na, cap)?;
    let pulled = pullback_filtered_potential(h, &phi_a, n, cap)?;
    let phi_b = compute_filtered_potential(b, gb, n, cap)?
        .truncated(n + 1)
        .renamed(pulled.vars().clone());
    let metric = Metric::from_pairing(gb)?;
    let mut rhs = FilteredPoly::zero(pulled.vars().clone());
    let mut obstructed = FilteredPoly::zero(pulled.vars().clone());
    let mut potential = RelationReport::new("filtered potential invariance");
    let mut tagged = RelationReport::new("filtered tagged derivative identity");
    let energies: std::collections::BTreeSet<Energy> = pulled
        .comps
        .keys()
        .chain(phi_b.comps.keys())
        .chain(b.energies().iter())
        .cloned()
        .collect();
    for e in energies {
        let (cyc, obs) = strict_projection(&pulled.component(&e));
        for (w, c) in cyc.terms() {
            rhs.add(&e, w, c);
        }
        for (w, c) in obs.terms() {
            obstructed.add(&e, w, c);
        }
        let mut left = phi_b.component(&e);
        left.add(&[], &-left.constant());
        let mut right = cyc.clone();
        right.add(&[], &-right.constant());
        potential.merge(at_energy(left.compare(&right, "potential"), &e));
        let mut closed =
            TaggedNCPoly::zero(pulled.vars().clone(), metric.tag_degrees(pulled.vars()));
        for ((k, eo), t) in b.ops() {
            if eo != &e || *k > n {
                continue;
            }
            for (inputs, v) in t.iter() {
                for (j, m) in v.iter() {
                    closed.add(inputs, j, m);
                }
            }
        }
        let derived = nc_derivative(&cyc, &metric, CyclicMode::Strict)?;
        tagged.merge(at_energy(closed.compare(&derived, "tagged derivative"), &e));
    }
    let constant = phi_b
        .constant(cap.clone())
        .add(&rhs.constant(cap.clone()).neg());
    Ok(FilteredInvarianceReport {
        potential,
        tagged,
        lhs: phi_b,
        rhs,
        obstructed,
        constant,
    })
}
