use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::conditions::check_skew_symmetry;
use super::{map_offset, psi_map, sandwich_at, Pairing};
use crate::ainfty::{pushforward_algebra, AInftyAlgebra, AInftyMorphism};
use crate::bimodule::{
    check_bimodule_map, diagonal_bimodule, dual_bimodule_map, dual_of, induced_map, mod_words,
    Bimodule, BimoduleMap, ModWord,
};
use crate::error::{Error, Result};
use crate::graded::linsolve::inverse;
use crate::graded::tensor::words_of_degree;
use crate::graded::{
    int, is_odd, sign, words, GradedBasis, LinearSystem, Matrix, Scalar, Vector, Word,
};

/// Bookkeeping of an orbit-by-orbit solve.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionLog {
    pub orbits: usize,
    /// Unknowns left free by their subsystem and pinned to zero.
    pub pinned: usize,
}

/// Cyclic algebra `B` (equal to `A` as a graded space) with `f: A -> B`, `f_1 = id`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicModel {
    pub algebra: AInftyAlgebra,
    pub morphism: AInftyMorphism,
    pub pairing: Pairing,
    pub log: ConstructionLog,
}

/// Bimodule `D` (equal to `C` as a graded space) with a cyclic pairing and `g: C -> D`, `g_{0,0} = id`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicBimoduleModel {
    pub module: Bimodule,
    pub map: BimoduleMap,
    pub pairing: Pairing,
    pub log: ConstructionLog,
}

fn check_preconditions(c: &Bimodule, phi: &BimoduleMap, n: usize) -> Result<Pairing> {
    if phi.algebra() != c.algebra().basis() || phi.source() != c.module() {
        return Err(Error::BasisMismatch(
            "map bases differ from the given bimodule".into(),
        ));
    }
    let offset = map_offset(phi)?;
    let skew = check_skew_symmetry(phi, n);
    if !skew.pass() {
        let at = skew
            .failures
            .first()
            .map(|x| x.at.clone())
            .unwrap_or_default();
        return Err(Error::precondition(
            "phi",
            format!("skew symmetry fails at {at}"),
        ));
    }
    let dual = dual_of(c, crate::bimodule::DualPlacement::new(-(offset + 2)));
    let rep = check_bimodule_map(c, &dual, phi, n)?;
    if !rep.pass() {
        let at = rep
            .failures
            .first()
            .map(|x| x.at.clone())
            .unwrap_or_default();
        return Err(Error::precondition(
            "phi",
            format!("not a bimodule map (at {at})"),
        ));
    }
    let pairing = Pairing::from_bimodule_map(phi)?;
    pairing.inverse()?;
    Ok(pairing)
}

/// `c = X · G^{-1}`: the vector whose pairing with `e_j` is `x_j`.
fn raise(x: &Vector, ginv: &Matrix) -> Vector {
    let mut out = Vector::new();
    for (j, c) in x.iter() {
        for (o, g) in ginv[j].iter().enumerate() {
            if !g.is_zero() {
                out.add_term(o, &(c * g));
            }
        }
    }
    out
}

fn rotate(t: &[usize]) -> Word {
    let mut r = t[1..].to_vec();
    r.push(t[0]);
    r
}

/// Builds a cyclic model of `A` from a strong homotopy inner product `φ` whose
/// `φ_{0,0}` is non-degenerate on the chain level.
///
/// `f_k` is solved arity by arity from the `φ_{0,k-1}` equations, one cyclic orbit
/// of basis tuples at a time; `B` is then the structure making `f` a morphism.
/// The morphism carries components up to arity `n + 1`, which the identity
/// `f̃* ∘ ψ ∘ f̃ = φ` needs at arity `n`.
pub fn construct_cyclic_model(
    a: &AInftyAlgebra,
    phi: &BimoduleMap,
    n: usize,
) -> Result<CyclicModel> {
    let pairing = check_preconditions(&diagonal_bimodule(a), phi, n)?;
    let mut log = ConstructionLog::default();
    let f = solve_components(a, phi, &pairing, n, &mut |_, _| Scalar::zero(), &mut log)?;
    let b = pushforward_algebra(&a.truncated(n), &f)?;
    Ok(CyclicModel {
        algebra: b,
        morphism: f,
        pairing,
        log,
    })
}

/// Transports a cyclic `(A, g)` along a morphism `f` with `f_1 = id` solving the
/// cyclic-morphism conditions, with the free unknown of each orbit set by `gauge`
/// (called with the arity and the orbit's minimal tuple).
pub fn cyclic_gauge_transform(
    a: &AInftyAlgebra,
    g: &Pairing,
    n: usize,
    gauge: &mut dyn FnMut(usize, &[usize]) -> Scalar,
) -> Result<CyclicModel> {
    let psi = psi_map(a.basis(), g, n);
    let mut log = ConstructionLog::default();
    let f = solve_components(a, &psi, g, n, gauge, &mut log)?;
    let b = pushforward_algebra(&a.truncated(n), &f)?;
    Ok(CyclicModel {
        algebra: b,
        morphism: f,
        pairing: g.clone(),
        log,
    })
}

fn solve_components(
    a: &AInftyAlgebra,
    phi: &BimoduleMap,
    pairing: &Pairing,
    n: usize,
    gauge: &mut dyn FnMut(usize, &[usize]) -> Scalar,
    log: &mut ConstructionLog,
) -> Result<AInftyMorphism> {
    let ginv = pairing.inverse()?;
    let basis = a.basis();
    let degs = basis.shifted_degrees();
    let c = pairing.offset();
    let psi = psi_map(basis, pairing, n);
    let mut f = AInftyMorphism::identity(basis, n + 1);

    for k in 2..=n + 1 {
        let ft = induced_map(a, &f)?.truncated(n);
        let gstar = dual_bimodule_map(&ft, pairing.placement());
        let tuples = words_of_degree(&degs, k + 1, c);
        let rhs = |t: &[usize]| -> Scalar {
            let w = ModWord::new(&[], t[0], &t[1..k]);
            phi.eval(&w).get(t[k]) - sandwich_at(&gstar, &psi, &ft, &w).get(t[k])
        };
        let coeff = |t: &[usize]| -> Scalar {
            let rest: i64 = t[1..].iter().map(|i| degs[*i]).sum();
            sign(is_odd(degs[t[0]] * rest))
        };
        let mut values: BTreeMap<Word, Scalar> = BTreeMap::new();
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        for t in &tuples {
            if seen.contains(t) {
                continue;
            }
            let mut orbit = vec![t.clone()];
            loop {
                let r = rotate(orbit.last().expect("nonempty"));
                if &r == t {
                    break;
                }
                orbit.push(r);
            }
            seen.extend(orbit.iter().cloned());
            log.orbits += 1;
            let p = orbit.len();
            if p == 1 {
                // X(a..a) (1 - s) = rhs
                let s = coeff(t);
                let r = rhs(t);
                if s.is_one() {
                    if !r.is_zero() {
                        return Err(Error::HypothesesViolated {
                            arity: k,
                            family: t.clone(),
                        });
                    }
                    log.pinned += 1;
                    let x = gauge(k, t);
                    if !x.is_zero() {
                        values.insert(t.clone(), x);
                    }
                } else {
                    values.insert(t.clone(), r / int(2));
                }
                continue;
            }
            // the minimal representative t = orbit[0] is registered last
            let var = |q: usize| if q == 0 { p - 1 } else { q - 1 };
            let mut sys = LinearSystem::new(p);
            for q in 0..p {
                let next = (q + 1) % p;
                sys.push(
                    [(var(q), Scalar::one()), (var(next), -coeff(&orbit[q]))],
                    rhs(&orbit[q]),
                );
            }
            let free = sys.free_vars();
            let g0 = if free.is_empty() {
                Scalar::zero()
            } else {
                gauge(k, t)
            };
            let x = sys
                .solve(|_| g0.clone())
                .map_err(|_| Error::ClosednessViolated {
                    arity: k,
                    orbit: t.clone(),
                })?;
            log.pinned += free.len();
            for (q, o) in orbit.iter().enumerate() {
                if !x[var(q)].is_zero() {
                    values.insert(o.clone(), x[var(q)].clone());
                }
            }
        }
        let mut rows: BTreeMap<Word, Vector> = BTreeMap::new();
        for (t, x) in values {
            rows.entry(t[..k].to_vec()).or_default().add_term(t[k], &x);
        }
        for (w, x) in rows {
            f.set_value(&w, raise(&x, &ginv))?;
        }
    }
    Ok(f)
}

/// Module words `(x, v, y)` with `|x| + |y| = level` paired with an output `w`,
/// restricted to total shifted degree `offset`.
fn paired_words(
    alg: &GradedBasis,
    module: &GradedBasis,
    level: usize,
    offset: i64,
) -> Vec<(ModWord, usize)> {
    let mut out = Vec::new();
    for k in 0..=level {
        for x in words(alg.dim(), k) {
            for y in words(alg.dim(), level - k) {
                let s = alg.word_shifted(&x) + alg.word_shifted(&y);
                for v in 0..module.dim() {
                    for w in 0..module.dim() {
                        if s + module.shifted(v) + module.shifted(w) == offset {
                            out.push((ModWord::new(&x, v, &y), w));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Builds a bimodule `D` with a cyclic pairing from a skew bimodule map
/// `φ: C -> C*` whose `φ_{0,0}` is non-degenerate on the chain level.
pub fn construct_cyclic_bimodule(
    cm: &Bimodule,
    phi: &BimoduleMap,
    n: usize,
) -> Result<CyclicBimoduleModel> {
    let pairing = check_preconditions(cm, phi, n)?;
    let ginv = pairing.inverse()?;
    let alg = cm.algebra().basis();
    let module = cm.module();
    let c = pairing.offset();
    let psi = psi_map(alg, &pairing, n);
    let mut g = BimoduleMap::new(alg.clone(), module.clone(), module.clone(), n);
    for i in 0..module.dim() {
        g.add_entry(&ModWord::new(&[], i, &[]), i, &Scalar::one())?;
    }
    let mut log = ConstructionLog::default();

    for level in 1..=n {
        let gstar = dual_bimodule_map(&g, pairing.placement());
        let rhs = |w: &ModWord, out: usize| -> Scalar {
            phi.eval(w).get(out) - sandwich_at(&gstar, &psi, &g, w).get(out)
        };
        // Y(x,v,y,w) - (-1)^E Y(y,w,x,v) = rhs
        let coeff = |w: &ModWord, out: usize| -> Scalar {
            let (sx, sy) = (alg.word_shifted(&w.left), alg.word_shifted(&w.right));
            let (sv, sw) = (module.shifted(w.v), module.shifted(out));
            sign(is_odd(sx * (sv + sy + sw) + sv * (sx + sy + sw)))
        };
        let mut values: BTreeMap<ModWord, Vector> = BTreeMap::new();
        let mut seen: BTreeSet<(ModWord, usize)> = BTreeSet::new();
        for (w, out) in paired_words(alg, module, level, c) {
            if seen.contains(&(w.clone(), out)) {
                continue;
            }
            let partner = (ModWord::new(&w.right, out, &w.left), w.v);
            seen.insert((w.clone(), out));
            seen.insert(partner.clone());
            log.orbits += 1;
            let key = |m: &ModWord, o: usize| {
                let mut k = m.key();
                k.push(o);
                k
            };
            if partner == (w.clone(), out) {
                let s = coeff(&w, out);
                let r = rhs(&w, out);
                if s.is_one() {
                    if !r.is_zero() {
                        return Err(Error::HypothesesViolated {
                            arity: level,
                            family: key(&w, out),
                        });
                    }
                    log.pinned += 1;
                } else {
                    values
                        .entry(w.clone())
                        .or_default()
                        .add_term(out, &(r / int(2)));
                }
                continue;
            }
            // the smaller of the two data is registered last and pinned if free
            let (first, second) = if (w.clone(), out) > partner {
                ((w.clone(), out), partner)
            } else {
                (partner, (w.clone(), out))
            };
            let mut sys = LinearSystem::new(2);
            sys.push(
                [(0, Scalar::one()), (1, -coeff(&first.0, first.1))],
                rhs(&first.0, first.1),
            );
            sys.push(
                [(1, Scalar::one()), (0, -coeff(&second.0, second.1))],
                rhs(&second.0, second.1),
            );
            let x = sys.solve(|_| Scalar::zero()).map_err(|_| {
                Error::UnsolvablePair(format!(
                    "{} ({})",
                    first.0.render(alg, module),
                    module.name(first.1)
                ))
            })?;
            log.pinned += sys.free_vars().len();
            for ((m, o), val) in [(first, &x[0]), (second, &x[1])] {
                values.entry(m).or_default().add_term(o, val);
            }
        }
        for (w, x) in values {
            g.set_value(&w, raise(&x, &ginv))?;
        }
    }
    let d = pushforward_bimodule(&cm.truncated(n), &g)?;
    Ok(CyclicBimoduleModel {
        module: d,
        map: g,
        pairing,
        log,
    })
}

/// The bimodule structure on the target of `g` making `g` a bimodule map, for `g_{0,0}` invertible.
pub fn pushforward_bimodule(c: &Bimodule, g: &BimoduleMap) -> Result<Bimodule> {
    if g.algebra() != c.algebra().basis() || g.source() != c.module() {
        return Err(Error::BasisMismatch(
            "map bases differ from the given bimodule".into(),
        ));
    }
    let dim = c.module().dim();
    if g.target().dim() != dim {
        return Err(Error::precondition("map", "g_00 is not invertible"));
    }
    let m: Matrix = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| g.eval(&ModWord::new(&[], j, &[])).get(i))
                .collect()
        })
        .collect();
    let inv = inverse(&m).ok_or_else(|| Error::precondition("map", "g_00 is not invertible"))?;
    let n = c.max_arity().min(g.max_arity());
    let mut d = Bimodule::new(c.algebra().clone(), g.target().clone(), n);
    for level in 0..=n {
        let mut r: BTreeMap<ModWord, Vector> = BTreeMap::new();
        for w in mod_words(c.algebra().dim(), dim, level)
            .into_iter()
            .filter(|w| w.left.len() + w.right.len() == level)
        {
            let v = g.apply(&c.bar(&w)).sub(&d.apply(&g.hat(&w)));
            if !v.is_zero() {
                r.insert(w, v);
            }
        }
        // b^D(x, u, y) = Σ_v (g_00^{-1})_{v,u} r(x, v, y)
        let mut vals: BTreeMap<ModWord, Vector> = BTreeMap::new();
        for (w, v) in r {
            for u in 0..dim {
                let x = &inv[w.v][u];
                if !x.is_zero() {
                    vals.entry(ModWord::new(&w.left, u, &w.right))
                        .or_default()
                        .add_scaled(&v, x);
                }
            }
        }
        for (w, v) in vals {
            d.set_value(&w, v)?;
        }
    }
    Ok(d)
}
