use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::map_offset;
use crate::ainfty::AInftyAlgebra;
use crate::bimodule::{
    check_bimodule_map, diagonal_bimodule, dual_of, BimoduleMap, DualPlacement, ModWord,
};
use crate::error::{Error, Result};
use crate::graded::linsolve::{nullspace, rank};
use crate::graded::tensor::words_of_degree;
use crate::graded::{chain_homology, fmt_scalar, is_odd, sign, GradedBasis, Scalar, Vector, Word};
use crate::report::RelationReport;

/// `φ_{k,l}(a, v, b)(w) = -(-1)^K φ_{l,k}(b, w, a)(v)` with `K = (Σ|a|' + |v|')(Σ|b|' + |w|')`.
pub fn check_skew_symmetry(phi: &BimoduleMap, n: usize) -> RelationReport {
    let (alg, src) = (phi.algebra(), phi.source());
    let mut rep = RelationReport::new("skew symmetry");
    for ((k, l), t) in phi.comps() {
        if k + l > n {
            continue;
        }
        for (key, val) in t.iter() {
            let w = ModWord::new(&key[..*k], key[*k], &key[k + 1..]);
            for (out, c) in val.iter() {
                let left = alg.word_shifted(&w.left) + src.shifted(w.v);
                let right = alg.word_shifted(&w.right) + src.shifted(out);
                let partner = phi.eval(&ModWord::new(&w.right, out, &w.left)).get(w.v);
                let defect = c + sign(is_odd(left * right)) * partner;
                rep.record(
                    k + l,
                    defect.is_zero(),
                    || format!("{} ({})", w.render(alg, src), src.name(out)),
                    || fmt_scalar(&defect),
                );
            }
        }
    }
    rep
}

/// `[a_i, a_j]`: `φ` on the cyclic word ending in `a_j`, module slot at `a_i`,
/// evaluated on `a_j`, with the Koszul sign of rotating the family into that order.
pub fn bracket(phi: &BimoduleMap, family: &[usize], i: usize, j: usize) -> Scalar {
    let degs = phi.source();
    let m = family.len();
    let rotated: Word = family[j + 1..]
        .iter()
        .chain(&family[..=j])
        .copied()
        .collect();
    let p = (i + m - j - 1) % m;
    let w = ModWord::new(&rotated[..p], rotated[p], &rotated[p + 1..m - 1]);
    let head: i64 = family[..=j].iter().map(|x| degs.shifted(*x)).sum();
    let tail: i64 = family[j + 1..].iter().map(|x| degs.shifted(*x)).sum();
    sign(is_odd(head * tail)) * phi.eval(&w).get(family[j])
}

fn require_square(phi: &BimoduleMap) -> Result<i64> {
    if phi.algebra() != phi.source() {
        return Err(Error::BasisMismatch(
            "map is not defined on the algebra itself".into(),
        ));
    }
    map_offset(phi)
}

/// `[a_i, a_j] + [a_j, a_k] + [a_k, a_i] = 0` for every family of length at most `n + 2`
/// and every `i < j < k`, together with the cyclic sum
/// `[a_1, a_m] + [a_2, a_1] + ... + [a_m, a_{m-1}] = 0`.
pub fn check_closedness(phi: &BimoduleMap, n: usize) -> Result<RelationReport> {
    let offset = require_square(phi)?;
    let basis = phi.source();
    let degs = basis.shifted_degrees();
    let mut rep = RelationReport::new("closedness");
    for m in 3..=n + 2 {
        for fam in words_of_degree(&degs, m, offset) {
            let mut br = vec![vec![Scalar::zero(); m]; m];
            for (i, row) in br.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    if i != j {
                        *x = bracket(phi, &fam, i, j);
                    }
                }
            }
            for i in 0..m {
                for j in i + 1..m {
                    for k in j + 1..m {
                        let s = &br[i][j] + &br[j][k] + &br[k][i];
                        rep.record(
                            m - 2,
                            s.is_zero(),
                            || {
                                format!(
                                    "{} (i,j,k)=({},{},{})",
                                    basis.render_word(&fam),
                                    i + 1,
                                    j + 1,
                                    k + 1
                                )
                            },
                            || fmt_scalar(&s),
                        );
                    }
                }
            }
            let mut cyc = br[0][m - 1].clone();
            for t in 1..m {
                cyc += &br[t][t - 1];
            }
            rep.record(
                m - 2,
                cyc.is_zero(),
                || format!("{} cyclic sum", basis.render_word(&fam)),
                || fmt_scalar(&cyc),
            );
        }
    }
    Ok(rep)
}

/// Outcome of the homological non-degeneracy check.
#[derive(Clone, Debug, PartialEq)]
pub struct Nondegeneracy {
    pub nondegenerate: bool,
    /// A cycle whose class pairs to zero with every class.
    pub witness: Option<Vector>,
}

/// Whether `φ_{0,0}` descends to a non-degenerate pairing on `H(A, m_1)`.
pub fn check_homological_nondegeneracy(
    a: &AInftyAlgebra,
    phi: &BimoduleMap,
) -> Result<Nondegeneracy> {
    let offset = require_square(phi)?;
    if phi.source() != a.basis() {
        return Err(Error::BasisMismatch(
            "map is not defined on the given algebra".into(),
        ));
    }
    let diag = diagonal_bimodule(a);
    let dual = dual_of(&diag, DualPlacement::new(-(offset + 2)));
    let rep = check_bimodule_map(&diag, &dual, &phi.truncated(1), 1.min(diag.max_arity()))?;
    if !rep.pass() {
        return Err(Error::precondition("phi", "φ_00 is not a chain map"));
    }
    let d: Vec<Vector> = (0..a.dim()).map(|i| a.eval(&[i])).collect();
    let c = chain_homology(a.basis(), &d)?;
    let h = c.incl.len();
    let vals: Vec<Vector> = c.incl.iter().map(|x| phi_00(phi, x)).collect();
    let m: Vec<Vec<Scalar>> = (0..h)
        .map(|q| (0..h).map(|p| pair_dense(&vals[p], &c.incl[q])).collect())
        .collect();
    if rank(&m, h) == h {
        return Ok(Nondegeneracy {
            nondegenerate: true,
            witness: None,
        });
    }
    // rows of `m` are indexed by the second argument, so its kernel gives the left radical
    let kernel = nullspace(&m, h);
    let mut w = Vector::new();
    for (p, x) in kernel[0].iter().enumerate() {
        w.add_scaled(&c.incl[p], x);
    }
    Ok(Nondegeneracy {
        nondegenerate: false,
        witness: Some(w),
    })
}

fn phi_00(phi: &BimoduleMap, x: &Vector) -> Vector {
    let mut out = Vector::new();
    for (i, c) in x.iter() {
        out.add_scaled(&phi.eval(&ModWord::new(&[], i, &[])), c);
    }
    out
}

fn pair_dense(dual: &Vector, v: &Vector) -> Scalar {
    let mut s = Scalar::zero();
    for (i, c) in v.iter() {
        s += c * dual.get(i);
    }
    s
}

/// The three conditions characterizing strong homotopy inner products.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerProductReport {
    pub skew: RelationReport,
    pub closed: RelationReport,
    pub homological: Nondegeneracy,
}

impl InnerProductReport {
    pub fn pass(&self) -> bool {
        self.skew.pass() && self.closed.pass() && self.homological.nondegenerate
    }
}

impl fmt::Display for InnerProductReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.skew, self.closed)?;
        match &self.homological.witness {
            None => writeln!(f, "homological non-degeneracy: PASS"),
            Some(w) => writeln!(f, "homological non-degeneracy: FAIL (radical class {w})"),
        }
    }
}

pub fn check_strong_homotopy_inner_product(
    a: &AInftyAlgebra,
    phi: &BimoduleMap,
    n: usize,
) -> Result<InnerProductReport> {
    Ok(InnerProductReport {
        skew: check_skew_symmetry(phi, n),
        closed: check_closedness(phi, n)?,
        homological: check_homological_nondegeneracy(a, phi)?,
    })
}

/// Coefficients `ω_{ij,IJ} = φ(e_I, e_i, e_J)(e_j)` of the non-constant two-form.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm {
    basis: GradedBasis,
    /// Keyed by `(I, i, J, j)`.
    pub entries: BTreeMap<(Word, usize, Word, usize), Scalar>,
}

impl SymplecticForm {
    pub fn get(&self, big_i: &[usize], i: usize, big_j: &[usize], j: usize) -> Scalar {
        self.entries
            .get(&(big_i.to_vec(), i, big_j.to_vec(), j))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// `ω_{ji,JI} = -(-1)^K ω_{ij,IJ}` with `K = (|I|' + |e_i|')(|J|' + |e_j|')`.
    pub fn check_skew(&self) -> RelationReport {
        let b = &self.basis;
        let mut rep = RelationReport::new("two-form skew symmetry");
        for ((bi, i, bj, j), c) in &self.entries {
            let k = (b.word_shifted(bi) + b.shifted(*i)) * (b.word_shifted(bj) + b.shifted(*j));
            let defect = self.get(bj, *j, bi, *i) + sign(is_odd(k)) * c;
            rep.record(
                bi.len() + bj.len(),
                defect.is_zero(),
                || format!("I={bi:?} i={i} J={bj:?} j={j}"),
                || fmt_scalar(&defect),
            );
        }
        rep
    }

    /// Entries with `I = J = ∅`.
    pub fn constant_part(&self) -> BTreeMap<(usize, usize), Scalar> {
        self.entries
            .iter()
            .filter(|((bi, _, bj, _), _)| bi.is_empty() && bj.is_empty())
            .map(|((_, i, _, j), c)| ((*i, *j), c.clone()))
            .collect()
    }
}

pub fn to_symplectic_form(phi: &BimoduleMap, n: usize) -> Result<SymplecticForm> {
    require_square(phi)?;
    for rep in [check_skew_symmetry(phi, n), check_closedness(phi, n)?] {
        if !rep.pass() {
            return Err(Error::precondition("phi", format!("{} fails", rep.name)));
        }
    }
    let mut entries = BTreeMap::new();
    for ((k, l), t) in phi.comps() {
        if k + l > n {
            continue;
        }
        for (key, v) in t.iter() {
            for (j, c) in v.iter() {
                entries.insert(
                    (key[..*k].to_vec(), key[*k], key[k + 1..].to_vec(), j),
                    c.clone(),
                );
            }
        }
    }
    Ok(SymplecticForm {
        basis: phi.source().clone(),
        entries,
    })
}
