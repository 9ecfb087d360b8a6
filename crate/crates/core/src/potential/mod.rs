//! Noncommutative polynomials in formal dual variables, cyclization, the tagged
//! derivation and the potential of a cyclic A∞-algebra.

mod invariance;

pub use invariance::{
    check_potential_invariance, compute_potential, pullback_potential, tagged_closed_form,
    InvarianceReport,
};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{fmt_scalar, is_odd, ratio, sign, GradedBasis, Matrix, Scalar, Word};
use crate::report::RelationReport;

/// Storage key ordering words by length, then lexicographically.
type Key = (usize, Word);

fn key(w: &[usize]) -> Key {
    (w.len(), w.to_vec())
}

/// Variable table: `x_i` has degree `-deg(e_i)`, so its shifted degree has the
/// parity of `|e_i|'`. Signs are Koszul signs in those shifted degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variables {
    names: Vec<String>,
    degrees: Vec<i64>,
}

impl Variables {
    pub fn new(names: Vec<String>, degrees: Vec<i64>) -> Self {
        assert_eq!(names.len(), degrees.len());
        Self { names, degrees }
    }

    /// One variable `{prefix}_{name}` per basis vector.
    pub fn dual_to(basis: &GradedBasis, prefix: &str) -> Self {
        Self {
            names: basis
                .names()
                .iter()
                .map(|n| format!("{prefix}_{n}"))
                .collect(),
            degrees: (0..basis.dim()).map(|i| -basis.degree(i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn shifted(&self, i: usize) -> i64 {
        self.degrees[i] - 1
    }

    pub fn word_shifted(&self, w: &[usize]) -> i64 {
        w.iter().map(|i| self.shifted(*i)).sum()
    }

    fn render(&self, w: &[usize]) -> String {
        w.iter()
            .map(|i| self.names[*i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicMode {
    /// `(x_i)^n` is cyclic only when rotating it back onto itself carries sign `+1`.
    Strict,
    /// Every rotation orbit is cyclic; its sign is read off along the shortest rotation.
    General,
}

/// Exact noncommutative polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct NCPoly {
    vars: Variables,
    terms: BTreeMap<Key, Scalar>,
}

impl NCPoly {
    pub fn zero(vars: Variables) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    /// Same coefficients over a renamed variable table of the same degrees.
    pub fn renamed(mut self, vars: Variables) -> Self {
        assert_eq!(
            vars.degrees, self.vars.degrees,
            "renaming must preserve degrees"
        );
        self.vars = vars;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, w: &[usize], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let k = key(w);
        let e = self.terms.entry(k.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, w: &[usize]) -> Scalar {
        self.terms
            .get(&key(w))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Terms in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter().map(|((_, w), c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(&self) -> Scalar {
        self.coeff(&[])
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add(w, &-c);
        }
        out
    }

    /// Words of length at most `len`.
    pub fn truncated(&self, len: usize) -> NCPoly {
        let terms = self
            .terms
            .iter()
            .filter(|((l, _), _)| *l <= len)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        NCPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Homogeneous component of word length `len`.
    pub fn component(&self, len: usize) -> NCPoly {
        let terms = self
            .terms
            .iter()
            .filter(|((l, _), _)| *l == len)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        NCPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|(l, _)| *l).max().unwrap_or(0)
    }

    /// Entrywise comparison; failures are reported at word length.
    pub fn compare(&self, other: &NCPoly, name: &str) -> RelationReport {
        let mut rep = RelationReport::new(name);
        let keys: std::collections::BTreeSet<&Key> =
            self.terms.keys().chain(other.terms.keys()).collect();
        for (l, w) in keys {
            let d = self.coeff(w) - other.coeff(w);
            rep.record(*l, d.is_zero(), || self.vars.render(w), || fmt_scalar(&d));
        }
        rep
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(w, c)| {
                if w.is_empty() {
                    fmt_scalar(c)
                } else {
                    format!("{} · {}", fmt_scalar(c), self.vars.render(w))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sign of moving the first `j` letters of `w` to the end.
pub fn rotation_sign(vars: &Variables, w: &[usize], j: usize) -> Scalar {
    sign(is_odd(
        vars.word_shifted(&w[..j]) * vars.word_shifted(&w[j..]),
    ))
}

fn rotate(w: &[usize], j: usize) -> Word {
    w[j..].iter().chain(&w[..j]).copied().collect()
}

/// Smallest `r >= 1` with `rotate(w, r) == w`.
fn period(w: &[usize]) -> usize {
    (1..=w.len())
        .find(|r| w.len() % r == 0 && rotate(w, *r) == w)
        .unwrap_or(w.len().max(1))
}

/// Whether some rotation maps `w` onto itself with sign `-1`.
pub fn self_rotation_odd(vars: &Variables, w: &[usize]) -> bool {
    !w.is_empty() && rotation_sign(vars, w, period(w)) != Scalar::one()
}

/// Total of each rotation orbit, carried to its lexicographically least word
/// along the shortest rotation.
fn orbit_totals(p: &NCPoly) -> BTreeMap<Word, Scalar> {
    let vars = &p.vars;
    let mut totals: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (w, c) in p.terms() {
        let r = period(w);
        let (j0, rep) = (0..r)
            .map(|j| (j, rotate(w, j)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty");
        // w is the rotation of rep by (r - j0) mod r
        let back = if w.is_empty() { 0 } else { (r - j0) % r };
        *totals.entry(rep.clone()).or_insert_with(Scalar::zero) +=
            c * rotation_sign(vars, &rep, back);
    }
    totals.retain(|_, c| !c.is_zero());
    totals
}

fn spread(out: &mut NCPoly, rep: &[usize], total: &Scalar) {
    let r = period(rep);
    let weight = total * ratio(1, r as i64);
    for j in 0..r {
        let s = rotation_sign(&out.vars, rep, j) * &weight;
        out.add(&rotate(rep, j), &s);
    }
}

/// The average over all rotations, which is the strict cyclization where it
/// exists, together with the general cyclization of the orbits it annihilates
/// (words rotating onto themselves with sign `-1`).
pub fn strict_projection(p: &NCPoly) -> (NCPoly, NCPoly) {
    let vars = &p.vars;
    let mut kept = NCPoly::zero(vars.clone());
    let mut dropped = NCPoly::zero(vars.clone());
    for (rep, total) in orbit_totals(p) {
        if self_rotation_odd(vars, &rep) {
            spread(&mut dropped, &rep, &total);
        } else {
            spread(&mut kept, &rep, &total);
        }
    }
    (kept, dropped)
}

/// Signed symmetrization over rotations, weighted by the inverse number of
/// distinct rotations of each word.
///
/// General mode carries each word to the lexicographically least rotation of its
/// orbit along the shortest rotation, then spreads the total evenly over the
/// distinct rotations. Strict mode agrees with it except on orbits that rotate
/// onto themselves with sign `-1`: a nonzero total there has no strict cyclization.
pub fn nc_cyclize(p: &NCPoly, mode: CyclicMode) -> Result<NCPoly> {
    match mode {
        CyclicMode::General => {
            let mut out = NCPoly::zero(p.vars.clone());
            for (rep, total) in orbit_totals(p) {
                spread(&mut out, &rep, &total);
            }
            Ok(out)
        }
        CyclicMode::Strict => {
            let (kept, dropped) = strict_projection(p);
            if let Some((w, _)) = dropped.terms().next() {
                return Err(Error::NoStrictCyclization(p.vars.render(w)));
            }
            Ok(kept)
        }
    }
}

pub fn is_cyclic(p: &NCPoly, mode: CyclicMode) -> bool {
    nc_cyclize(p, mode).map(|q| &q == p).unwrap_or(false)
}

/// Polynomial whose every monomial ends in a single tag variable `t_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedNCPoly {
    vars: Variables,
    tag_degrees: Vec<i64>,
    terms: BTreeMap<(Key, usize), Scalar>,
}

impl TaggedNCPoly {
    pub fn zero(vars: Variables, tag_degrees: Vec<i64>) -> Self {
        Self {
            vars,
            tag_degrees,
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn tag_degree(&self, j: usize) -> i64 {
        self.tag_degrees[j]
    }

    pub fn add(&mut self, w: &[usize], tag: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let k = (key(w), tag);
        let e = self.terms.entry(k.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, w: &[usize], tag: usize) -> Scalar {
        self.terms
            .get(&(key(w), tag))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, usize, &Scalar)> {
        self.terms.iter().map(|(((_, w), t), c)| (w, *t, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncated(&self, len: usize) -> TaggedNCPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(((l, _), _), _)| *l <= len)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        TaggedNCPoly {
            vars: self.vars.clone(),
            tag_degrees: self.tag_degrees.clone(),
            terms,
        }
    }

    /// Entrywise comparison; failures are reported at the length of the untagged word.
    pub fn compare(&self, other: &TaggedNCPoly, name: &str) -> RelationReport {
        let mut rep = RelationReport::new(name);
        let keys: std::collections::BTreeSet<&(Key, usize)> =
            self.terms.keys().chain(other.terms.keys()).collect();
        for ((l, w), t) in keys {
            let d = self.coeff(w, *t) - other.coeff(w, *t);
            rep.record(
                *l,
                d.is_zero(),
                || format!("{} t_{}", self.vars.render(w), t),
                || fmt_scalar(&d),
            );
        }
        rep
    }
}

impl fmt::Display for TaggedNCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(w, t, c)| {
                let body = if w.is_empty() {
                    String::new()
                } else {
                    format!("{} ", self.vars.render(w))
                };
                format!("{} · {}t_{}", fmt_scalar(c), body, t)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Metric data for the tagged derivation: `g_ij` on the dual basis, its inverse
/// `g^{ij}` and the degree `c` with `|e_i|' + |e_j|' = c` whenever `g_ij != 0`.
#[derive(Clone, Debug)]
pub struct Metric {
    pub g: Matrix,
    pub ginv: Matrix,
    pub offset: i64,
}

impl Metric {
    pub fn from_pairing(g: &crate::cyclic::Pairing) -> Result<Self> {
        Ok(Self {
            g: g.matrix(),
            ginv: g.inverse()?,
            offset: g.offset(),
        })
    }

    fn dim(&self) -> usize {
        self.g.len()
    }

    /// Shifted degree `α - 2 - |x_j|'` of `t_j`, with `α` the degree of the pairing.
    pub fn tag_degrees(&self, vars: &Variables) -> Vec<i64> {
        let alpha = -(self.offset + 2);
        (0..self.dim())
            .map(|j| alpha - 2 - vars.shifted(j))
            .collect()
    }
}

/// `p ←∂/∂x_i g^{ij} t_j` for a cyclic `p`.
pub fn nc_derivative(p: &NCPoly, metric: &Metric, mode: CyclicMode) -> Result<TaggedNCPoly> {
    if !is_cyclic(p, mode) {
        return Err(Error::NonCyclic(p.to_string()));
    }
    Ok(leibniz_derivative(p, metric))
}

/// The Leibniz rule applied letter by letter, each term rotated so the tag is last.
pub fn leibniz_derivative(p: &NCPoly, metric: &Metric) -> TaggedNCPoly {
    let vars = &p.vars;
    let tags = metric.tag_degrees(vars);
    let mut out = TaggedNCPoly::zero(vars.clone(), tags);
    for (w, c) in p.terms() {
        for pos in 0..w.len() {
            let rot = rotate(w, pos + 1);
            let s = rotation_sign(vars, w, pos + 1) * c;
            let head = &rot[..rot.len() - 1];
            for (j, x) in metric.ginv[w[pos]].iter().enumerate() {
                if !x.is_zero() {
                    out.add(head, j, &(&s * x));
                }
            }
        }
    }
    out
}

/// A polynomial whose tagged derivative is `t`, before cyclization: the tag is
/// replaced by the variable it came from, weighted by the inverse word length.
pub fn nc_antiderivative(t: &TaggedNCPoly, metric: &Metric) -> NCPoly {
    let mut out = NCPoly::zero(t.vars.clone());
    for (w, tag, c) in t.terms() {
        let n = w.len() as i64 + 1;
        for (i, g) in metric.g[tag].iter().enumerate() {
            if !g.is_zero() {
                let mut u = w.clone();
                u.push(i);
                out.add(&u, &(c * g * ratio(1, n)));
            }
        }
    }
    out
}
