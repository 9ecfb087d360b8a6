//! Homology of a finite graded complex together with a contraction onto it.

use std::collections::HashSet;

use num_traits::Zero;

use super::basis::GradedBasis;
use super::linsolve::{inverse, nullspace, rank, Matrix};
use super::scalar::{Scalar, Vector};
use crate::error::{Error, Result};

/// A linear map stored by columns: `cols[j]` is the image of basis vector `j`.
pub type LinearMap = Vec<Vector>;

pub fn apply(map: &LinearMap, v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (j, c) in v.iter() {
        out.add_scaled(&map[j], c);
    }
    out
}

fn to_matrix(cols: &[Vector], rows: usize) -> Matrix {
    let mut m = vec![vec![Scalar::zero(); cols.len()]; rows];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.iter() {
            m[i][j] = c.clone();
        }
    }
    m
}

/// Contraction data `(i, p, h)` with `i p + d h + h d = id`, `p i = id`
/// and side conditions `h i = 0`, `p h = 0`, `h h = 0`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub homology: GradedBasis,
    /// Cycle representatives, one per homology basis vector.
    pub incl: LinearMap,
    /// Coordinates in the homology basis, one column per chain basis vector.
    pub proj: LinearMap,
    pub homotopy: LinearMap,
}

/// `d` is given by columns over `basis` and must raise degree by one.
pub fn chain_homology(basis: &GradedBasis, d: &LinearMap) -> Result<Contraction> {
    let n = basis.dim();
    for (j, col) in d.iter().enumerate() {
        for (i, _) in col.iter() {
            if basis.degree(i) != basis.degree(j) + 1 {
                return Err(Error::DegreeRule(format!(
                    "differential sends {} to {}",
                    basis.name(j),
                    basis.name(i)
                )));
            }
        }
        let dd = apply(d, col);
        if !dd.is_zero() {
            return Err(Error::NotADifferential(format!(
                "d d {} = {}",
                basis.name(j),
                dd
            )));
        }
    }
    let dm = to_matrix(d, n);

    // T: basis vectors whose images form a basis of im d.
    let mut t: Vec<usize> = Vec::new();
    let mut seen: Vec<Vector> = Vec::new();
    for j in 0..n {
        let mut trial = seen.clone();
        trial.push(d[j].clone());
        if rank(&to_matrix(&trial, n), trial.len()) == trial.len() {
            seen = trial;
            t.push(j);
        }
    }
    let b: Vec<Vector> = t.iter().map(|&j| d[j].clone()).collect();

    // H: kernel vectors completing B to a basis of ker d.
    let mut spanned = b.clone();
    let mut h: Vec<Vector> = Vec::new();
    for z in nullspace(&dm, n) {
        let z = Vector::from_dense(&z);
        let mut trial = spanned.clone();
        trial.push(z.clone());
        if rank(&to_matrix(&trial, n), trial.len()) == trial.len() {
            spanned = trial;
            h.push(z);
        }
    }

    let mut frame = h.clone();
    frame.extend(b.iter().cloned());
    frame.extend(t.iter().map(|&j| Vector::basis(j)));
    let q = inverse(&to_matrix(&frame, n)).expect("H, B, T form a basis");
    let (nh, nb) = (h.len(), b.len());
    let proj: LinearMap = (0..n)
        .map(|j| Vector::from_dense(&(0..nh).map(|r| q[r][j].clone()).collect::<Vec<_>>()))
        .collect();
    let homotopy: LinearMap = (0..n)
        .map(|j| {
            let mut v = Vector::new();
            for s in 0..nb {
                v.add_term(t[s], &q[nh + s][j]);
            }
            v
        })
        .collect();

    let mut names = HashSet::new();
    let mut entries = Vec::new();
    for z in &h {
        let (lead, _) = z.iter().next().expect("nonzero cycle");
        let mut name = format!("[{}]", basis.name(lead));
        let mut k = 1;
        while !names.insert(name.clone()) {
            k += 1;
            name = format!("[{}]{}", basis.name(lead), k);
        }
        entries.push((name, basis.degree(lead)));
    }
    Ok(Contraction {
        homology: GradedBasis::new(entries)?,
        incl: h,
        proj,
        homotopy,
    })
}
