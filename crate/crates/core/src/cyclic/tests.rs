use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::ainfty::{check_ainfty, check_morphism};
use crate::bimodule::{check_bimodule, diagonal_bimodule, dual_bimodule};
use crate::fixtures;
use crate::graded::int;
use crate::random::random_pulled_back;

fn gauged(rng: &mut ChaCha8Rng, a: &AInftyAlgebra, g: &Pairing, n: usize) -> CyclicModel {
    cyclic_gauge_transform(a, g, n, &mut |_, _| int(rng.gen_range(-2..=2))).unwrap()
}

fn lemma_equivalence(a: &AInftyAlgebra, g: &Pairing, n: usize) -> (bool, bool) {
    let cyc = check_cyclic(a, g, n).unwrap().pass();
    let psi = pairing_to_bimodule_map(a, g).unwrap();
    let diag = diagonal_bimodule(a);
    let dual = dual_bimodule(a, g.placement());
    let map = crate::bimodule::check_bimodule_map(&diag, &dual, &psi, n - 1)
        .unwrap()
        .pass();
    (cyc, map)
}

#[test]
fn fixtures_are_cyclic() {
    for (name, a, g) in fixtures::all(4) {
        let rep = check_cyclic(&a, &g, 4).unwrap();
        assert!(rep.pass(), "{name} alpha={}: {rep}", g.alpha());
    }
}

#[test]
fn wrong_sign_breaks_cyclicity() {
    let (a, _) = fixtures::torus2(3);
    let g =
        Pairing::from_entries(a.basis().clone(), -2, &[(0, 3, int(1)), (1, 2, int(1))]).unwrap();
    let rep = check_cyclic(&a, &g, 3).unwrap();
    assert!(!rep.pass());
    assert_eq!(rep.failures[0].arity, 2);
}

#[test]
fn degenerate_pairing_has_witness() {
    let (a, _) = fixtures::torus2(3);
    let g = Pairing::from_entries(a.basis().clone(), -2, &[(0, 3, int(1))]).unwrap();
    match check_cyclic(&a, &g, 3) {
        Err(Error::DegeneratePairing { witness }) => assert!(!witness.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn skew_partner_is_filled_in() {
    let (a, g) = fixtures::lambda_theta(1, 3);
    // |1|' = -1, |θ|' = 0
    assert_eq!(g.get(1, 0), int(-1));
    assert!(
        Pairing::from_entries(a.basis().clone(), -1, &[(0, 1, int(1)), (1, 0, int(1))]).is_err()
    );
    assert!(Pairing::from_entries(a.basis().clone(), 0, &[(0, 1, int(1))]).is_err());
}

#[test]
fn zero_algebra_any_pairing() {
    let (a, g) = fixtures::torus2(3);
    let zero = AInftyAlgebra::new(a.basis().clone(), 3);
    assert!(check_cyclic(&zero, &g, 3).unwrap().pass());
    assert_eq!(lemma_equivalence(&zero, &g, 3), (true, true));
}

#[test]
fn first_order_identity() {
    // <m_1 u, u> is its own rotation on the acyclic pair, with |u|' even
    let (a, g) = fixtures::s3_plus_pair(3);
    let u = 2;
    assert_ne!(g.pair(&a.eval(&[u]), &Vector::basis(u)), int(0));
    assert!(check_cyclic(&a, &g, 1).unwrap().pass());
    let mut b = a.clone();
    b.add_entry(&[u], 3, &int(1)).unwrap();
    assert!(check_cyclic(&b, &g, 1).unwrap().pass());
}

#[test]
fn gauge_transforms_are_cyclic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, a, g) in fixtures::all(4) {
        let m = gauged(&mut rng, &a, &g, 4);
        assert!(check_ainfty(&m.algebra, 4).pass(), "{name}");
        assert!(check_cyclic(&m.algebra, &g, 4).unwrap().pass(), "{name}");
        assert!(
            check_morphism(&a, &m.algebra, &m.morphism, 4)
                .unwrap()
                .pass(),
            "{name}"
        );
        let rep = check_cyclic_morphism(&a, &m.algebra, &m.morphism, &g, &g, 4).unwrap();
        assert!(rep.pass(), "{name}: {rep}");
        let rep = check_cyclic_morphism_diagram(&a, &m.algebra, &m.morphism, &g, &g, 4).unwrap();
        assert!(rep.pass(), "{name}: {rep}");
    }
}

#[test]
fn pairing_map_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (name, a, g) in fixtures::all(4) {
        let m = gauged(&mut rng, &a, &g, 4);
        assert_eq!(lemma_equivalence(&m.algebra, &g, 4), (true, true), "{name}");
        // perturb one higher product entry
        let mut b = m.algebra.clone();
        let degs = b.basis().shifted_degrees();
        if let Some((w, o)) = crate::random::random_entry(&mut rng, b.basis(), 2, 1) {
            b.add_entry(&w, o, &int(1)).unwrap();
            if check_ainfty(&b, 4).pass() {
                let (cyc, map) = lemma_equivalence(&b, &g, 4);
                assert_eq!(cyc, map, "{name} {w:?} {o} {degs:?}");
            }
        }
    }
}

#[test]
fn bad_cyclic_morphism_is_located() {
    let (a, g) = fixtures::lambda_theta(1, 3);
    let mut f = crate::ainfty::AInftyMorphism::identity(a.basis(), 3);
    // f_2(θ, θ) = θ violates the arity-3 condition
    f.add_entry(&[1, 1], 1, &int(1)).unwrap();
    let b = crate::ainfty::pushforward_algebra(&a, &f).unwrap();
    if check_cyclic(&b, &g, 3).unwrap().pass() {
        let rep = check_cyclic_morphism(&a, &b, &f, &g, &g, 3).unwrap();
        assert!(!rep.pass());
        assert_eq!(rep.failures[0].arity, 3);
    }
}

fn only_if_instance(rng: &mut ChaCha8Rng, n: usize) -> (AInftyAlgebra, AInftyMorphism, Pairing) {
    let p = random_pulled_back(rng, n);
    (p.source, p.morphism, p.pairing)
}

#[test]
fn pulled_back_inner_products_satisfy_the_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..8 {
        let (a, f, g) = only_if_instance(&mut rng, 3);
        let phi = pullback_inner_product(&a, &f, &g, 3).unwrap();
        let rep = check_strong_homotopy_inner_product(&a, &phi, 3).unwrap();
        assert!(rep.pass(), "{rep}");
        let diag = diagonal_bimodule(&a);
        let dual = dual_of(&diag, g.placement());
        assert!(check_bimodule_map(&diag, &dual, &phi, 3).unwrap().pass());
        let omega = to_symplectic_form(&phi, 3).unwrap();
        assert!(omega.check_skew().pass());
    }
}

#[test]
fn construction_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..8 {
        let (a, f, g) = only_if_instance(&mut rng, 3);
        let phi = pullback_inner_product(&a, &f, &g, 3).unwrap();
        let m = construct_cyclic_model(&a, &phi, 3).unwrap();
        assert!(check_ainfty(&m.algebra, 3).pass());
        let rep = check_cyclic(&m.algebra, &m.pairing, 3).unwrap();
        assert!(rep.pass(), "{rep}");
        assert!(check_morphism(&a, &m.algebra, &m.morphism, 3)
            .unwrap()
            .pass());
        let back = pullback_inner_product(&a, &m.morphism, &m.pairing, 3).unwrap();
        let rep = compare_maps("reassembly", &back, &phi, 3);
        assert!(rep.pass(), "{rep}");
    }
}

#[test]
fn construction_of_cyclic_input_is_identity() {
    for (name, a, g) in fixtures::all(4) {
        let psi = pairing_to_bimodule_map(&a, &g).unwrap();
        let m = construct_cyclic_model(&a, &psi, 3).unwrap();
        assert_eq!(
            m.morphism,
            crate::ainfty::AInftyMorphism::identity(a.basis(), 4),
            "{name}"
        );
        assert_eq!(m.algebra, a.truncated(3), "{name}");
    }
}

#[test]
fn bimodule_construction_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let (a, f, g) = only_if_instance(&mut rng, 3);
        let phi = pullback_inner_product(&a, &f, &g, 3).unwrap();
        let c = diagonal_bimodule(&a).truncated(3);
        let m = construct_cyclic_bimodule(&c, &phi, 3).unwrap();
        assert!(check_bimodule(&m.module, 3).unwrap().pass());
        assert!(check_bimodule_map(&c, &m.module, &m.map, 3).unwrap().pass());
        let rep = check_cyclic_bimodule(&m.module, &m.pairing, 3).unwrap();
        assert!(rep.pass(), "{rep}");
        let back = sandwich(&m.map, &m.pairing, 3).unwrap();
        assert!(compare_maps("reassembly", &back, &phi, 3).pass());
    }
}

#[test]
fn homological_degeneracy_witness() {
    let basis = GradedBasis::new([("p", 0), ("q", 0)]).unwrap();
    let a = AInftyAlgebra::new(basis.clone(), 2);
    // |p|' = |q|' = -1, offset -2, alpha = 0
    let g = Pairing::from_entries(basis, 0, &[(0, 0, int(1))]).unwrap();
    let phi = psi_map(a.basis(), &g, 1);
    let nd = check_homological_nondegeneracy(&a, &phi).unwrap();
    assert!(!nd.nondegenerate);
    assert_eq!(nd.witness, Some(Vector::basis(1)));
}

#[test]
fn skew_failure_is_reported() {
    let (a, g) = fixtures::lambda_theta(1, 3);
    let mut phi = pairing_to_bimodule_map(&a, &g).unwrap();
    phi.add_entry(&ModWord::new(&[], 0, &[]), 1, &int(1))
        .unwrap();
    assert!(!check_skew_symmetry(&phi, 2).pass());
    assert!(matches!(
        construct_cyclic_model(&a, &phi, 2),
        Err(Error::Precondition { .. })
    ));
}
