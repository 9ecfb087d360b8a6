//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    let mut t = zeros(cols, m.len());
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = x.clone();
        }
    }
    t
}

pub fn mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    let mut out = zeros(a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &row[k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Scalar::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let t = &f * &m[r][j];
                        m[i][j] -= t;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(m: &Matrix, cols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, cols).len()
}

/// Basis of the right kernel `{x : m x = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut a, 2 * n);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A sparse linear system over numbered unknowns.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    vars: usize,
    rows: Vec<(BTreeMap<usize, Scalar>, Scalar)>,
}

/// Index of the first row found inconsistent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistent(pub usize);

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            rows: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn add_var(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    pub fn push(&mut self, coeffs: impl IntoIterator<Item = (usize, Scalar)>, rhs: Scalar) {
        let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (v, c) in coeffs {
            assert!(v < self.vars, "unknown variable {v}");
            let e = row.entry(v).or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                row.remove(&v);
            }
        }
        self.rows.push((row, rhs));
    }

    /// Solves, assigning `free(v)` to every unknown left free by elimination.
    /// Pivots are chosen at the smallest variable index, so later-registered
    /// unknowns are the ones left free.
    pub fn solve(&self, free: impl Fn(usize) -> Scalar) -> Result<Vec<Scalar>, Inconsistent> {
        let mut pivot_rows: Vec<(usize, BTreeMap<usize, Scalar>, Scalar)> = Vec::new();
        for (origin, (row, rhs)) in self.rows.iter().enumerate() {
            let (mut row, mut rhs) = (row.clone(), rhs.clone());
            for (p, prow, prhs) in &pivot_rows {
                if let Some(c) = row.get(p).cloned() {
                    for (v, x) in prow {
                        let e = row.entry(*v).or_insert_with(Scalar::zero);
                        *e -= &c * x;
                        if e.is_zero() {
                            row.remove(v);
                        }
                    }
                    rhs -= &c * prhs;
                }
            }
            let Some((&p, c)) = row.iter().next() else {
                if !rhs.is_zero() {
                    return Err(Inconsistent(origin));
                }
                continue;
            };
            let inv = Scalar::one() / c;
            for x in row.values_mut() {
                *x *= &inv;
            }
            rhs *= &inv;
            for (_, prow, prhs) in pivot_rows.iter_mut() {
                if let Some(c) = prow.get(&p).cloned() {
                    for (v, x) in &row {
                        let e = prow.entry(*v).or_insert_with(Scalar::zero);
                        *e -= &c * x;
                        if e.is_zero() {
                            prow.remove(v);
                        }
                    }
                    *prhs -= &c * &rhs;
                }
            }
            pivot_rows.push((p, row, rhs));
        }
        let pivots: BTreeMap<usize, usize> = pivot_rows
            .iter()
            .enumerate()
            .map(|(i, (p, _, _))| (*p, i))
            .collect();
        let mut x: Vec<Scalar> = (0..self.vars)
            .map(|v| {
                if pivots.contains_key(&v) {
                    Scalar::zero()
                } else {
                    free(v)
                }
            })
            .collect();
        for (p, row, rhs) in &pivot_rows {
            let mut val = rhs.clone();
            for (v, c) in row {
                if v != p {
                    val -= c * &x[*v];
                }
            }
            x[*p] = val;
        }
        Ok(x)
    }

    /// Unknowns not fixed by the rows.
    pub fn free_vars(&self) -> Vec<usize> {
        let mut m: Matrix = self
            .rows
            .iter()
            .map(|(r, _)| {
                let mut d = vec![Scalar::zero(); self.vars];
                for (v, c) in r {
                    d[*v] = c.clone();
                }
                d
            })
            .collect();
        let pivots = rref(&mut m, self.vars);
        (0..self.vars).filter(|v| !pivots.contains(v)).collect()
    }
}

/// Result of [`solve_cycle_system`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSolution {
    pub assignment: Vec<Scalar>,
    pub consistent: bool,
    /// First row found contradictory.
    pub witness: Option<usize>,
    pub free: Vec<usize>,
}

/// Solves with every free unknown pinned to zero.
pub fn solve_cycle_system(system: &LinearSystem) -> CycleSolution {
    match system.solve(|_| Scalar::zero()) {
        Ok(assignment) => CycleSolution {
            assignment,
            consistent: true,
            witness: None,
            free: system.free_vars(),
        },
        Err(Inconsistent(row)) => CycleSolution {
            assignment: Vec::new(),
            consistent: false,
            witness: Some(row),
            free: system.free_vars(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::scalar::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|x| int(*x)).collect())
            .collect()
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv, 2, 2), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col: Matrix = v.into_iter().map(|x| vec![x]).collect();
            assert!(mul(&a, &col, 3, 1).iter().all(|r| r[0].is_zero()));
        }
    }

    #[test]
    fn sparse_solve_with_free_values() {
        let mut s = LinearSystem::new(3);
        s.push([(0, int(1)), (2, int(-1))], int(4));
        s.push([(1, int(1)), (2, int(1))], int(0));
        let x = s.solve(|_| int(7)).unwrap();
        assert_eq!(x, vec![int(11), int(-7), int(7)]);
        assert_eq!(s.free_vars(), vec![2]);
    }

    #[test]
    fn three_cycle() {
        let mut s = LinearSystem::new(3);
        s.push([(0, int(1)), (1, int(-1))], int(1));
        s.push([(1, int(1)), (2, int(-1))], int(2));
        s.push([(2, int(1)), (0, int(-1))], int(-3));
        let sol = solve_cycle_system(&s);
        assert!(sol.consistent);
        assert_eq!(sol.assignment, vec![int(3), int(2), int(0)]);
        assert_eq!(sol.free, vec![2]);
    }

    #[test]
    fn inconsistency_is_reported() {
        let mut s = LinearSystem::new(2);
        s.push([(0, int(1)), (1, int(-1))], int(1));
        s.push([(1, int(1)), (0, int(-1))], int(1));
        let sol = solve_cycle_system(&s);
        assert!(!sol.consistent);
        assert_eq!(sol.witness, Some(1));
    }

    #[test]
    fn empty_system() {
        let sol = solve_cycle_system(&LinearSystem::new(0));
        assert!(sol.consistent && sol.assignment.is_empty());
    }

    proptest::proptest! {
        #[test]
        fn solutions_reproduce_rhs(entries in proptest::collection::vec((0usize..5, 0usize..5, -3i64..4), 1..12), rhs in proptest::collection::vec(-5i64..6, 5)) {
            let mut s = LinearSystem::new(5);
            // consistent by construction: rhs is A x0 for a fixed x0
            let x0: Vec<Scalar> = rhs.iter().map(|r| int(*r)).collect();
            let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); 5];
            for (r, v, c) in &entries {
                *rows[*r].entry(*v).or_insert_with(Scalar::zero) += int(*c);
            }
            for row in &rows {
                let b: Scalar = row.iter().map(|(v, c)| c * &x0[*v]).sum();
                s.push(row.iter().map(|(v, c)| (*v, c.clone())), b);
            }
            let sol = solve_cycle_system(&s);
            proptest::prop_assert!(sol.consistent);
            for row in &rows {
                let lhs: Scalar = row.iter().map(|(v, c)| c * &sol.assignment[*v]).sum();
                let b: Scalar = row.iter().map(|(v, c)| c * &x0[*v]).sum();
                proptest::prop_assert_eq!(lhs, b);
            }
        }
    }
}
