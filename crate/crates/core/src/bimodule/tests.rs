use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::map::bimodule_map_defects;
use super::*;
use crate::ainfty::{pushforward_algebra, AInftyMorphism};
use crate::graded::int;
use crate::random::{random_dga, random_graded_iso, random_morphism};

fn exterior(n: usize) -> AInftyAlgebra {
    crate::random::dga_catalog(1)[0].to_algebra(n)
}

/// Random A∞-algebra with nonzero higher products: a DGA pushed forward along a
/// random nonlinear automorphism.
fn random_ainfty(rng: &mut ChaCha8Rng, n: usize) -> AInftyAlgebra {
    let a = random_dga(rng, n);
    let iso = random_graded_iso(rng, a.basis());
    let f = random_morphism(rng, a.basis(), a.basis(), &iso, 3, n, 0.3);
    pushforward_algebra(&a, &f).unwrap()
}

#[test]
fn bar_on_module_slot_alone() {
    let a = exterior(3);
    let m = diagonal_bimodule(&a);
    let s = m.bar(&ModWord::new(&[], 1, &[]));
    assert!(s.is_zero());
    let s = m.bar(&ModWord::new(&[1], 0, &[]));
    // t·1 and the straddling m_2(t, 1) = -t
    assert_eq!(s.iter().count(), 1);
}

#[test]
fn bar_third_sum_sign() {
    // only m_1(u) = w with |u|' odd: acting on v passes one odd letter,
    // acting on the right factor passes two.
    let basis = GradedBasis::new([("u", 0), ("w", 1)]).unwrap();
    let mut a = AInftyAlgebra::new(basis.clone(), 2);
    a.add_entry(&[0], 1, &int(1)).unwrap();
    let m = diagonal_bimodule(&a);
    let s = m.bar(&ModWord::new(&[0], 0, &[0]));
    let mut expected = ModSum::new();
    expected.add(ModWord::new(&[1], 0, &[0]), &int(1));
    expected.add(ModWord::new(&[0], 1, &[0]), &int(-1));
    expected.add(ModWord::new(&[0], 0, &[1]), &int(1));
    assert_eq!(s, expected);
}

#[test]
fn diagonal_copies_operations() {
    let a = exterior(3);
    let m = diagonal_bimodule(&a);
    assert_eq!(m.max_arity(), 2);
    assert_eq!(m.eval(&ModWord::new(&[1], 0, &[])), a.eval(&[1, 0]));
    assert_eq!(m.eval(&ModWord::new(&[], 1, &[0])), a.eval(&[1, 0]));
}

#[test]
fn zero_structure_over_differential_fails() {
    let basis = GradedBasis::new([("u", 0), ("w", 1)]).unwrap();
    let mut a = AInftyAlgebra::new(basis.clone(), 3);
    a.add_entry(&[0], 1, &int(1)).unwrap();
    let mut m = Bimodule::new(a, basis, 2);
    m.add_entry(&ModWord::new(&[], 0, &[]), 1, &int(1)).unwrap();
    m.add_entry(&ModWord::new(&[], 0, &[]), 1, &int(-1))
        .unwrap();
    // b_{0,0} = 0 but m_1 != 0 on the algebra factors: b_{1,0}(m_1 a, v) terms are missing
    m.add_entry(&ModWord::new(&[0], 0, &[]), 0, &int(1))
        .unwrap();
    assert!(!check_bimodule(&m, 2).unwrap().pass());
}

#[test]
fn diagonal_and_dual_pass_on_random_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..12 {
        let a = if i % 2 == 0 {
            random_dga(&mut rng, 5)
        } else {
            random_ainfty(&mut rng, 5)
        };
        let diag = diagonal_bimodule(&a);
        assert!(check_bimodule(&diag, 4).unwrap().pass());
        for alpha in [-3, -2] {
            let dual = dual_bimodule(&a, DualPlacement::new(alpha));
            let rep = check_bimodule(&dual, 4).unwrap();
            assert!(rep.pass(), "{rep}");
        }
    }
}

#[test]
fn other_dual_sign_reading_fails() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut failures = 0;
    for _ in 0..12 {
        let a = random_ainfty(&mut rng, 5);
        let dual = dual_with_reading(
            &diagonal_bimodule(&a),
            DualPlacement::new(-2),
            DualSignReading::FirstRightUnshifted,
        );
        if !check_bimodule(&dual, 4).unwrap().pass() {
            failures += 1;
        }
    }
    assert!(failures > 0);
}

#[test]
fn dual_00_component() {
    // b*_{0,0}(v*)(w) = (-1)^{1 + |v*|'} v*(m_1 w)
    let basis = GradedBasis::new([("u", 0), ("w", 1)]).unwrap();
    let mut a = AInftyAlgebra::new(basis, 2);
    a.add_entry(&[0], 1, &int(3)).unwrap();
    let place = DualPlacement::new(-1);
    let dual = dual_bimodule(&a, place);
    let vs = dual.module().shifted(1);
    let got = dual.eval(&ModWord::new(&[], 1, &[])).get(0);
    let want = if (1 + vs).rem_euclid(2) == 1 {
        int(-3)
    } else {
        int(3)
    };
    assert_eq!(got, want);
}

#[test]
fn induced_structures() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..6 {
        let a = random_dga(&mut rng, 4);
        let iso = random_graded_iso(&mut rng, a.basis());
        let f = random_morphism(&mut rng, a.basis(), a.basis(), &iso, 3, 4, 0.3);
        let b = pushforward_algebra(&a, &f).unwrap();
        let ind = induced_bimodule(&b, &a, &f).unwrap();
        assert!(check_bimodule(&ind, 3).unwrap().pass());
        let ft = induced_map(&a, &f).unwrap();
        let diag = diagonal_bimodule(&a);
        assert!(check_bimodule_map(&diag, &ind, &ft, 3).unwrap().pass());
        for (arity, t) in f.comps() {
            for (w, v) in t.iter() {
                for k in 0..*arity {
                    assert_eq!(&ft.eval(&ModWord::new(&w[..k], w[k], &w[k + 1..])), v);
                }
            }
        }
    }
}

#[test]
fn identity_induces_diagonal() {
    let a = exterior(4);
    let id = AInftyMorphism::identity(a.basis(), 4);
    let ind = induced_bimodule(&a, &a, &id).unwrap();
    assert_eq!(ind, diagonal_bimodule(&a));
    let ft = induced_map(&a, &id).unwrap();
    assert_eq!(ft, BimoduleMap::identity(&ind));
}

#[test]
fn dual_map_twice_is_identity_up_to_names() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = random_dga(&mut rng, 4);
    let iso = random_graded_iso(&mut rng, a.basis());
    let f = random_morphism(&mut rng, a.basis(), a.basis(), &iso, 3, 4, 0.5);
    let ft = induced_map(&a, &f).unwrap().truncated(3);
    let place = DualPlacement::new(-2);
    let dd = dual_bimodule_map(&dual_bimodule_map(&ft, place), place);
    assert_eq!(dd.comps(), ft.comps());
}

#[test]
fn composite_of_maps_is_a_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let a = random_dga(&mut rng, 4);
    let iso = random_graded_iso(&mut rng, a.basis());
    let f = random_morphism(&mut rng, a.basis(), a.basis(), &iso, 3, 4, 0.3);
    let b = pushforward_algebra(&a, &f).unwrap();
    let iso2 = random_graded_iso(&mut rng, b.basis());
    let g = random_morphism(&mut rng, b.basis(), b.basis(), &iso2, 3, 4, 0.3);
    let c = pushforward_algebra(&b, &g).unwrap();
    let gf = crate::ainfty::compose_morphisms(&g, &f).unwrap();
    let ind_b = induced_bimodule(&b, &a, &f).unwrap();
    let ind_c = induced_bimodule(&c, &a, &gf).unwrap();
    // g as a map of A-bimodules B -> C is induced along f
    let mut gb = BimoduleMap::new(a.basis().clone(), b.basis().clone(), c.basis().clone(), 3);
    for w in mod_words(a.dim(), b.dim(), 3) {
        let left = fhat(&f, &w.left);
        let right = fhat(&f, &w.right);
        let mut v = Vector::new();
        for (u1, c1) in left.iter() {
            for (u2, c2) in right.iter() {
                let mut u = u1.clone();
                u.push(w.v);
                u.extend_from_slice(u2);
                v.add_scaled(&g.eval(&u), &(c1 * c2));
            }
        }
        gb.set_value(&w, v).unwrap();
    }
    assert!(check_bimodule_map(&ind_b, &ind_c, &gb, 3).unwrap().pass());
    let ft = induced_map(&a, &f).unwrap().truncated(3);
    let comp = compose_bimodule_maps(&gb, &ft).unwrap();
    assert!(bimodule_map_defects(&diagonal_bimodule(&a), &ind_c, &comp, 3).pass());
    assert_eq!(comp, induced_map(&a, &gf).unwrap().truncated(3));
}
