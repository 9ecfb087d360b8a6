//! Small cyclic algebras used in examples and tests.

use crate::ainfty::AInftyAlgebra;
use crate::cyclic::Pairing;
use crate::graded::int;
use crate::random::Dga;

fn pairing_on(a: &AInftyAlgebra, alpha: i64, entries: &[(usize, usize, i64)]) -> Pairing {
    let e: Vec<_> = entries.iter().map(|(i, j, c)| (*i, *j, int(*c))).collect();
    Pairing::from_entries(a.basis().clone(), alpha, &e).expect("fixture pairing is valid")
}

/// `Λ(θ)` with `|θ| = p` and `<1, θ> = 1`.
pub fn lambda_theta(p: i64, max_arity: usize) -> (AInftyAlgebra, Pairing) {
    let mut d = Dga::new(&["1", "theta"], &[0, p]);
    d.unital();
    let a = d.to_algebra(max_arity);
    let g = pairing_on(&a, -p, &[(0, 1, 1)]);
    (a, g)
}

/// Cohomology of the 2-sphere.
pub fn sphere2(max_arity: usize) -> (AInftyAlgebra, Pairing) {
    lambda_theta(2, max_arity)
}

/// `k[x]/x^3` with `|x| = 2`, the cohomology of the complex projective plane.
pub fn truncated_poly(max_arity: usize) -> (AInftyAlgebra, Pairing) {
    let mut d = Dga::new(&["1", "x", "xx"], &[0, 2, 4]);
    d.unital();
    d.mul(1, 1, 2, 1);
    let a = d.to_algebra(max_arity);
    let g = pairing_on(&a, -4, &[(0, 2, 1), (1, 1, 1)]);
    (a, g)
}

/// Cohomology of the 2-torus, `Λ(a, b)` with `|a| = |b| = 1`.
pub fn torus2(max_arity: usize) -> (AInftyAlgebra, Pairing) {
    let mut d = Dga::new(&["1", "a", "b", "ab"], &[0, 1, 1, 2]);
    d.unital();
    d.mul(1, 2, 3, 1);
    d.mul(2, 1, 3, -1);
    let a = d.to_algebra(max_arity);
    let g = pairing_on(&a, -2, &[(0, 3, 1), (1, 2, -1)]);
    (a, g)
}

/// Cohomology of the 3-sphere plus an acyclic pair `du = v`, orthogonal to it.
pub fn s3_plus_pair(max_arity: usize) -> (AInftyAlgebra, Pairing) {
    let mut d = Dga::new(&["1", "theta", "u", "v"], &[0, 3, 1, 2]);
    d.mul(0, 0, 0, 1);
    d.mul(0, 1, 1, 1);
    d.mul(1, 0, 1, 1);
    d.d(2, 3, 1);
    let a = d.to_algebra(max_arity);
    let g = pairing_on(&a, -3, &[(0, 1, 1), (2, 3, 1)]);
    (a, g)
}

/// All fixtures at the given truncation.
pub fn all(max_arity: usize) -> Vec<(&'static str, AInftyAlgebra, Pairing)> {
    let mut out = Vec::new();
    for p in [-1, 0, 1, 2, 3] {
        let (a, g) = lambda_theta(p, max_arity);
        out.push(("lambda_theta", a, g));
    }
    let (a, g) = truncated_poly(max_arity);
    out.push(("truncated_poly", a, g));
    let (a, g) = torus2(max_arity);
    out.push(("torus2", a, g));
    let (a, g) = s3_plus_pair(max_arity);
    out.push(("s3_plus_pair", a, g));
    out
}
