//! Seeded random instances for property tests and the acceptance suite.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::ainfty::{
    compose_morphisms, from_entries, pullback_algebra, pushforward_algebra, AInftyAlgebra,
    AInftyMorphism, Convention,
};
use crate::cyclic::{cyclic_gauge_transform, Pairing};
use crate::filtered::{deform, Energy, FilteredAInftyAlgebra, FilteredAInftyMorphism};
use crate::fixtures;
use crate::graded::homology::LinearMap;
use crate::graded::linsolve::inverse;
use crate::graded::{int, ratio, words, GradedBasis, Scalar, Vector};

/// A DGA written in the ns convention: unshifted degrees, product table and differential.
#[derive(Clone, Debug)]
pub struct Dga {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    /// `(a, b, c, coeff)`: `a · b` has `coeff` on `c`.
    pub product: Vec<(usize, usize, usize, Scalar)>,
    /// `(a, c, coeff)`: `d a` has `coeff` on `c`.
    pub differential: Vec<(usize, usize, Scalar)>,
}

impl Dga {
    pub fn new(names: &[&str], degrees: &[i64]) -> Self {
        Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            degrees: degrees.to_vec(),
            product: Vec::new(),
            differential: Vec::new(),
        }
    }

    pub fn mul(&mut self, a: usize, b: usize, c: usize, x: i64) {
        self.product.push((a, b, c, int(x)));
    }

    pub fn d(&mut self, a: usize, c: usize, x: i64) {
        self.differential.push((a, c, int(x)));
    }

    pub fn unital(&mut self) {
        for i in 0..self.names.len() {
            self.mul(0, i, i, 1);
            if i != 0 {
                self.mul(i, 0, i, 1);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Converts to the shifted convention with the given truncation bound.
    pub fn to_algebra(&self, max_arity: usize) -> AInftyAlgebra {
        let basis = GradedBasis::new(self.names.iter().cloned().zip(self.degrees.iter().copied()))
            .expect("distinct names");
        let mut entries: Vec<(Vec<usize>, usize, Scalar)> = Vec::new();
        for (a, c, x) in &self.differential {
            entries.push((vec![*a], *c, x.clone()));
        }
        for (a, b, c, x) in &self.product {
            entries.push((vec![*a, *b], *c, x.clone()));
        }
        from_entries(basis, max_arity.max(2), Convention::Ns, &entries)
            .expect("catalog respects degrees")
            .with_max_arity(max_arity)
    }

    /// Graded tensor product with the Koszul sign `(x ⊗ y)(x' ⊗ y') = (-1)^{|y||x'|} x x' ⊗ y y'`.
    pub fn tensor(&self, other: &Dga) -> Dga {
        let n2 = other.dim();
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for i in 0..self.dim() {
            for j in 0..n2 {
                names.push(format!("{}{}", self.names[i], other.names[j]));
                degrees.push(self.degrees[i] + other.degrees[j]);
            }
        }
        let mut out = Dga {
            names,
            degrees,
            product: Vec::new(),
            differential: Vec::new(),
        };
        for (a, b, c, x) in &self.product {
            for (a2, b2, c2, y) in &other.product {
                let s = if (other.degrees[*a2] * self.degrees[*b]).rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                };
                out.product
                    .push((idx(*a, *a2), idx(*b, *b2), idx(*c, *c2), x * y * int(s)));
            }
        }
        for (a, c, x) in &self.differential {
            for j in 0..n2 {
                out.differential.push((idx(*a, j), idx(*c, j), x.clone()));
            }
        }
        for (a2, c2, y) in &other.differential {
            for i in 0..self.dim() {
                let s = if self.degrees[i].rem_euclid(2) == 1 {
                    -1
                } else {
                    1
                };
                out.differential
                    .push((idx(i, *a2), idx(i, *c2), y * int(s)));
            }
        }
        out
    }
}

/// Small DGAs with a free degree parameter `p`.
pub fn dga_catalog(p: i64) -> Vec<Dga> {
    let mut out = Vec::new();

    let mut ext = Dga::new(&["1", "t"], &[0, p]);
    ext.unital();
    out.push(ext.clone());

    let mut trunc = Dga::new(&["1", "x", "xx"], &[0, p, 2 * p]);
    trunc.unital();
    trunc.mul(1, 1, 2, 1);
    out.push(trunc);

    let mut pair = Dga::new(&["1", "u", "v"], &[0, p, p + 1]);
    pair.unital();
    pair.d(1, 2, 1);
    out.push(pair);

    // upper triangular 2x2 matrices, e12 in degree 1, d = [e12, -]
    let mut tri = Dga::new(&["e11", "e12", "e22"], &[0, 1, 0]);
    tri.mul(0, 0, 0, 1);
    tri.mul(0, 1, 1, 1);
    tri.mul(1, 2, 1, 1);
    tri.mul(2, 2, 2, 1);
    tri.d(0, 1, -1);
    tri.d(2, 1, 1);
    out.push(tri);

    let mut mixed = Dga::new(&["1", "x", "y", "z"], &[0, 1, 1, 2]);
    mixed.unital();
    mixed.d(1, 3, 1);
    mixed.mul(2, 2, 3, 1);
    out.push(mixed);

    let mut ext2 = Dga::new(&["1", "s"], &[0, p + 1]);
    ext2.unital();
    out.push(ext.tensor(&ext2));

    let mut pair_nu = Dga::new(&["u", "v"], &[p, p + 1]);
    pair_nu.d(0, 1, 1);
    out.push(ext.tensor(&pair_nu));

    out
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Scalar>> {
    loop {
        let m: Vec<Vec<Scalar>> = (0..n)
            .map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect())
            .collect();
        if inverse(&m).is_some() {
            return m;
        }
    }
}

/// Random degree-preserving linear automorphism, as columns.
pub fn random_graded_iso<R: Rng>(rng: &mut R, basis: &GradedBasis) -> LinearMap {
    let n = basis.dim();
    let mut cols = vec![Vector::new(); n];
    let mut degs: Vec<i64> = (0..n).map(|i| basis.degree(i)).collect();
    degs.sort();
    degs.dedup();
    for d in degs {
        let block: Vec<usize> = (0..n).filter(|i| basis.degree(*i) == d).collect();
        let m = random_invertible(rng, block.len());
        for (jj, j) in block.iter().enumerate() {
            for (ii, i) in block.iter().enumerate() {
                cols[*j].add_term(*i, &m[ii][jj]);
            }
        }
    }
    cols
}

/// Random DGA of dimension at most 4, transported by a random graded automorphism.
pub fn random_dga<R: Rng>(rng: &mut R, max_arity: usize) -> AInftyAlgebra {
    let p = rng.gen_range(-1..=2);
    let cat = dga_catalog(p);
    let base = cat
        .choose(rng)
        .expect("nonempty catalog")
        .to_algebra(max_arity);
    let iso = random_graded_iso(rng, base.basis());
    let f = AInftyMorphism::linear(base.basis(), base.basis(), &iso, max_arity)
        .expect("degree preserving");
    crate::ainfty::pullback_algebra(&base, &f).expect("invertible")
}

/// Random shifted-convention tensor entries of the right degrees, for perturbations.
pub fn random_entry<R: Rng>(
    rng: &mut R,
    basis: &GradedBasis,
    k: usize,
    out_shift: i64,
) -> Option<(Vec<usize>, usize)> {
    let mut cands = Vec::new();
    for w in words(basis.dim(), k) {
        let want = out_shift + basis.word_shifted(&w);
        for o in 0..basis.dim() {
            if basis.shifted(o) == want {
                cands.push((w.clone(), o));
            }
        }
    }
    cands.choose(rng).cloned()
}

/// Random morphism components `f_k` for `2 <= k <= top` on top of `f_1 = lin`.
pub fn random_morphism<R: Rng>(
    rng: &mut R,
    source: &GradedBasis,
    target: &GradedBasis,
    lin: &LinearMap,
    top: usize,
    max_arity: usize,
    density: f64,
) -> AInftyMorphism {
    let mut f = AInftyMorphism::linear(source, target, lin, max_arity).expect("degree preserving");
    for k in 2..=top.min(max_arity) {
        for w in words(source.dim(), k) {
            let want = source.word_shifted(&w);
            for o in 0..target.dim() {
                if target.shifted(o) == want && rng.gen_bool(density) {
                    let c = int(rng.gen_range(-2..=2));
                    if !c.is_zero() {
                        f.add_entry(&w, o, &c).expect("degree checked");
                    }
                }
            }
        }
    }
    f
}

/// Two cyclic algebras joined by a cyclic morphism `morphism: source → target`.
#[derive(Clone, Debug)]
pub struct CyclicPair {
    pub source: AInftyAlgebra,
    pub source_pairing: Pairing,
    pub target: AInftyAlgebra,
    pub target_pairing: Pairing,
    pub morphism: AInftyMorphism,
}

/// Moves a cyclic algebra along a random linear automorphism, transporting the pairing.
pub fn random_isometric_copy<R: Rng>(
    rng: &mut R,
    a: &AInftyAlgebra,
    g: &Pairing,
) -> (AInftyAlgebra, Pairing, AInftyMorphism) {
    let iso = random_graded_iso(rng, a.basis());
    let l = AInftyMorphism::linear(a.basis(), a.basis(), &iso, a.max_arity())
        .expect("degree preserving");
    let b = pushforward_algebra(a, &l).expect("invertible");
    let gb = g.transported(&iso).expect("invertible");
    (b, gb, l)
}

/// A fixture moved isometrically, then joined to a random gauge transform of
/// itself followed by a second isometric move.
pub fn random_cyclic_pair<R: Rng>(rng: &mut R, n: usize) -> CyclicPair {
    let all = fixtures::all(n + 1);
    let (_, a0, g0) = &all[rng.gen_range(0..all.len())];
    let (a, ga, _) = random_isometric_copy(rng, a0, g0);
    let m = cyclic_gauge_transform(&a, &ga, n, &mut |_, _| int(rng.gen_range(-2..=2)))
        .expect("cyclic input");
    let (b, gb, l) = random_isometric_copy(rng, &m.algebra, &ga);
    let h = compose_morphisms(&l, &m.morphism).expect("composable");
    CyclicPair {
        source: a.truncated(n),
        source_pairing: ga,
        target: b,
        target_pairing: gb,
        morphism: h.truncated(n),
    }
}

/// A cyclic `(B, ψ)` with a random `f: A → B`, `f_1` invertible and components
/// up to arity 3, `A` being the pullback of `B` along `f`.
#[derive(Clone, Debug)]
pub struct PulledBack {
    pub source: AInftyAlgebra,
    pub target: AInftyAlgebra,
    pub pairing: Pairing,
    pub morphism: AInftyMorphism,
}

pub fn random_pulled_back<R: Rng>(rng: &mut R, n: usize) -> PulledBack {
    let all = fixtures::all(n + 1);
    let (_, a0, g) = &all[rng.gen_range(0..all.len())];
    let b = cyclic_gauge_transform(a0, g, n + 1, &mut |_, _| int(rng.gen_range(-2..=2)))
        .expect("cyclic input")
        .algebra;
    let iso = random_graded_iso(rng, b.basis());
    let f = random_morphism(rng, b.basis(), b.basis(), &iso, 3, n + 1, 0.3);
    let a = pullback_algebra(&b, &f).expect("invertible linear part");
    PulledBack {
        source: a,
        target: b,
        pairing: g.clone(),
        morphism: f,
    }
}

/// A cyclic DGA deformation pair: `source` is the deformation of `target` by a
/// random positive-energy element `b` and `morphism = id + b` runs from it to
/// `target`, which may itself be curved by an earlier deformation.
#[derive(Clone, Debug)]
pub struct FilteredPair {
    pub source: FilteredAInftyAlgebra,
    pub target: FilteredAInftyAlgebra,
    pub pairing: Pairing,
    pub morphism: FilteredAInftyMorphism,
}

/// Random sum of one or two terms `c T^λ e^n y` with `y` of even shifted degree
/// `-2n` and `λ ∈ {1/2, 1, 3/2}`.
pub fn random_deformation<R: Rng>(rng: &mut R, basis: &GradedBasis) -> Vec<(Energy, Vector)> {
    let even: Vec<usize> = (0..basis.dim())
        .filter(|i| basis.shifted(*i) % 2 == 0)
        .collect();
    let mut out: Vec<(Energy, Vector)> = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let i = *even.choose(rng).expect("an even element");
        let e = Energy::new(ratio(rng.gen_range(1..=3), 2), -basis.shifted(i) / 2);
        let c = int(*[-2, -1, 1, 2].choose(rng).expect("nonempty"));
        match out.iter_mut().find(|(f, _)| *f == e) {
            Some((_, v)) => v.add_term(i, &c),
            None => out.push((e, Vector::basis(i).scaled(&c))),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// A deformation pair with `h_0 ≠ 0`, the target exact up to the arity that
/// substitutions below `cap` reach from arity `n`.
pub fn random_filtered_pair<R: Rng>(rng: &mut R, n: usize, cap: &Scalar) -> FilteredPair {
    let reach = n
        + 1
        + (cap * int(2))
            .floor()
            .to_integer()
            .try_into()
            .unwrap_or(0usize);
    let all: Vec<_> = fixtures::all(2)
        .into_iter()
        .filter(|(_, a, _)| (0..a.dim()).any(|i| a.basis().shifted(i) % 2 == 0))
        .collect();
    let (_, a0, g0) = &all[rng.gen_range(0..all.len())];
    let (a, g, _) = random_isometric_copy(rng, a0, g0);
    let mut target =
        FilteredAInftyAlgebra::from_unfiltered(&a.clone().with_max_arity(reach), cap.clone());
    if rng.gen_bool(0.5) {
        let b1 = random_deformation(rng, a.basis());
        target = deform(&target, &b1, reach).expect("deformation").0;
    }
    loop {
        let b = random_deformation(rng, a.basis());
        if b.is_empty() {
            continue;
        }
        let (source, morphism) = deform(&target, &b, n + 1).expect("deformation");
        return FilteredPair {
            source,
            target,
            pairing: g,
            morphism,
        };
    }
}
